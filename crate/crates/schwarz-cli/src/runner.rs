// SPDX-License-Identifier: MIT OR Apache-2.0
//! Executes the steps of a scenario and collects a structured report.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use schwarz_core::group::{Matrix, MatrixGroup};
use schwarz_core::invariants::{weighted_exponents, InvariantSet};
use schwarz_core::numeric::{
    check_ode_residual_numeric, find_fiber_point, integrate_orbit, invariant_drift, NumericOptions, NumericSystem, C64,
};
use schwarz_core::ode::{conjugate_by_factor, pullback, GaugeFactor, LinearODE};
use schwarz_core::pipeline::{
    derive_linear_ode, discriminant, lie_bracket, orbit_projection, standardize, standardness_witness,
    symbolic_residual, Connection, DynSystem, EvaluationMap, StandardnessWitness,
};
use schwarz_core::radical::RadicalMonomial;
use schwarz_core::ratfn::squarefree;
use schwarz_core::{Cyclo, Field, Poly};
use serde_json::{json, Map, Value};

use crate::context::Context;
use crate::manifest::{Equivariance, EquationDef, Scenario, Step};
use crate::render::{self, Style};
use crate::CliError;

/// Number of sample points used by sampled equivariance checks.
pub const EQUIVARIANCE_SAMPLES: usize = 6;

/// Settings that are not part of a manifest.
#[derive(Clone, Debug, Default)]
pub struct Options {
    pub conductor: Option<u32>,
    pub degree_bound: Option<u32>,
    pub style: Style,
    /// Directory against which relative trace paths are resolved.
    pub trace_dir: Option<PathBuf>,
}

/// Outcome of a scenario run.
#[derive(Clone, Debug)]
pub struct Report {
    pub value: Value,
    pub passed: bool,
}

impl Report {
    /// Pretty JSON with sorted keys and a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.value).expect("reports are plain JSON");
        s.push('\n');
        s
    }

    pub fn steps(&self) -> &[Value] {
        self.value["steps"].as_array().map(Vec::as_slice).unwrap_or(&[])
    }
}

pub fn run_scenario_file(path: &Path, opts: &Options) -> Result<Report, CliError> {
    run_scenario(&Scenario::load(path)?, opts)
}

/// Runs every step in order. A step that fails with an error ends the run;
/// the report then records the error together with the step index and kind.
pub fn run_scenario(s: &Scenario, opts: &Options) -> Result<Report, CliError> {
    let mut run = Runner::new(s, opts)?;
    let mut steps = Vec::new();
    let mut passed = true;
    for (index, step) in s.steps.iter().enumerate() {
        let mut entry = Map::new();
        entry.insert("index".into(), json!(index));
        entry.insert("op".into(), json!(step.op()));
        match run.step(step) {
            Ok(out) => {
                let ok = out.checks.values().all(|c| *c);
                passed &= ok;
                let status = if out.checks.is_empty() {
                    "done"
                } else if ok {
                    "pass"
                } else {
                    "fail"
                };
                entry.insert("status".into(), json!(status));
                if !out.checks.is_empty() {
                    entry.insert("checks".into(), json!(out.checks));
                }
                entry.insert("result".into(), Value::Object(out.result));
                steps.push(Value::Object(entry));
            }
            Err(e) => {
                passed = false;
                entry.insert("status".into(), json!("error"));
                entry.insert("error".into(), json!(format!("step {index} ({}): {e}", step.op())));
                steps.push(Value::Object(entry));
                break;
            }
        }
    }
    let mut value = Map::new();
    value.insert("scenario".into(), json!(s.name));
    value.insert("conductor".into(), json!(run.ctx.conductor));
    if !s.notes.is_empty() {
        value.insert("notes".into(), json!(s.notes));
    }
    value.insert("passed".into(), json!(passed));
    value.insert("steps".into(), Value::Array(steps));
    Ok(Report {
        value: Value::Object(value),
        passed,
    })
}

#[derive(Default)]
struct Outcome {
    result: Map<String, Value>,
    checks: BTreeMap<String, bool>,
}

impl Outcome {
    fn set(&mut self, key: &str, v: Value) {
        self.result.insert(key.into(), v);
    }

    fn check(&mut self, key: &str, ok: bool) {
        self.checks.insert(key.into(), ok);
    }
}

struct Runner<'a> {
    s: &'a Scenario,
    opts: &'a Options,
    ctx: Context,
    invariants: Option<InvariantSet>,
    group: Option<(Vec<Matrix>, MatrixGroup)>,
    connection: Option<Connection>,
    systems: BTreeMap<String, DynSystem>,
}

impl<'a> Runner<'a> {
    fn new(s: &'a Scenario, opts: &'a Options) -> Result<Self, CliError> {
        let mut ctx = Context::for_scenario(s, opts.conductor, opts.degree_bound)?;
        let invariants = if s.invariants.is_empty() { None } else { Some(ctx.invariants(&s.invariants)?) };
        for (name, text) in &s.definitions {
            ctx.define(name, text)?;
        }
        Ok(Runner {
            s,
            opts,
            ctx,
            invariants,
            group: None,
            connection: None,
            systems: BTreeMap::new(),
        })
    }

    fn invariants(&self) -> Result<&InvariantSet, CliError> {
        self.invariants
            .as_ref()
            .ok_or_else(|| CliError::Manifest("the scenario declares no invariants".into()))
    }

    fn group(&mut self) -> Result<&(Vec<Matrix>, MatrixGroup), CliError> {
        if self.group.is_none() {
            let file = self
                .s
                .group_file()?
                .ok_or_else(|| CliError::Manifest("the scenario declares no group".into()))?;
            self.group = Some(self.ctx.group(&file)?);
        }
        Ok(self.group.as_ref().unwrap())
    }

    fn connection(&mut self) -> Result<&Connection, CliError> {
        if self.connection.is_none() {
            self.connection = Some(Connection::new(self.invariants()?)?);
        }
        Ok(self.connection.as_ref().unwrap())
    }

    fn system(&mut self, name: &str) -> Result<&DynSystem, CliError> {
        if !self.systems.contains_key(name) {
            let def = self
                .s
                .systems
                .iter()
                .find(|d| d.name == name)
                .ok_or_else(|| CliError::Unknown { kind: "system", name: name.into() })?;
            let sys = self.ctx.system(def)?;
            self.systems.insert(name.into(), sys);
        }
        Ok(&self.systems[name])
    }

    fn phi(&self, overrides: &Option<Vec<String>>) -> Result<EvaluationMap, CliError> {
        let texts = overrides.as_ref().unwrap_or(&self.s.evaluations);
        if texts.is_empty() {
            return Err(CliError::Manifest("no evaluations given".into()));
        }
        self.ctx.evaluation_map(texts)
    }

    fn lambda(&self) -> Result<u32, CliError> {
        self.s.degree.ok_or_else(|| CliError::Manifest("the scenario declares no degree".into()))
    }

    fn witness(&self, phi: &EvaluationMap) -> Result<Option<StandardnessWitness>, CliError> {
        let cands = weighted_exponents(self.invariants()?.degrees(), self.lambda()?);
        Ok(standardness_witness(phi, &cands, 0)?)
    }

    fn compare_equation(&self, var: usize, got: &LinearODE, expect: &EquationDef) -> Result<bool, CliError> {
        let want = self.ctx.equation_in(var, expect)?;
        Ok(got.coeffs() == want.coeffs())
    }

    fn step(&mut self, step: &Step) -> Result<Outcome, CliError> {
        let mut out = Outcome::default();
        let ts = self.ctx.ts.clone();
        match step {
            Step::GroupCheck { expect_order } => {
                let declared = self.s.group_file()?.and_then(|g| g.order);
                let (gens, g) = self.group()?;
                out.set("order", json!(g.order()));
                out.set("generators", json!(gens.len()));
                out.check("closed", g.is_closed());
                if let Some(o) = expect_order.or(declared) {
                    out.check("order", g.order() == o);
                }
            }
            Step::InvariantsCheck { expect } => {
                let set = self.invariants()?.clone();
                out.set("degrees", json!(set.degrees()));
                out.check("jacobian_nonzero", !set.jacobian_det()?.is_zero());
                if self.s.group.is_some() {
                    let (_, g) = self.group()?;
                    out.check("invariant", set.check_invariance(g)?);
                }
                for (name, text) in expect {
                    let i = set
                        .index_of(name)
                        .ok_or_else(|| CliError::Unknown { kind: "invariant", name: name.clone() })?;
                    let want = self.ctx.poly(text)?;
                    out.check(&format!("matches_{name}"), set.polys()[i] == want);
                }
            }
            Step::BuildSystem {
                system,
                expect_rhs,
                expect_negated,
                equivariance,
                expect_rejected,
            } => {
                let style = self.opts.style;
                let xs = self.ctx.xs.clone();
                if *expect_rejected {
                    match self.system(system) {
                        Err(CliError::Core(e @ schwarz_core::Error::Invalid(_))) => {
                            out.set("rejected", json!(e.to_string()));
                            out.check("rejected", true);
                        }
                        Err(e) => return Err(e),
                        Ok(_) => out.check("rejected", false),
                    }
                    return Ok(out);
                }
                let sys = self.system(system)?.clone();
                out.set("autonomous", json!(sys.is_autonomous()));
                out.set(
                    "rhs",
                    json!(sys.rhs().iter().map(|f| render::ratexpr(f, &xs, style)).collect::<Vec<_>>()),
                );
                out.check("defining_identity", sys.defining_identity_holds());
                if let Some(expect) = expect_rhs {
                    if expect.len() != sys.rhs().len() {
                        return Err(CliError::Manifest("expected right-hand side has the wrong length".into()));
                    }
                    for (j, text) in expect.iter().enumerate() {
                        let mut want = self.ctx.ratexpr(text)?;
                        if expect_negated.contains(&j) {
                            want = want.neg();
                        }
                        out.check(&format!("rhs_{}", j + 1), sys.rhs()[j] == want);
                    }
                }
                if let Some(mode) = equivariance {
                    let points = self.ctx.sample_points(EQUIVARIANCE_SAMPLES);
                    let (gens, _) = self.group()?;
                    let mut ok = true;
                    for g in gens {
                        ok &= match mode {
                            Equivariance::Exact => sys.is_equivariant(g)?,
                            Equivariance::Sampled => sampled_equivariance(&sys, g, &points)?,
                        };
                    }
                    out.check("equivariant", ok);
                }
            }
            Step::Witness {
                evaluations,
                expect_b,
                expect_none,
            } => {
                let phi = self.phi(evaluations)?;
                match self.witness(&phi)? {
                    None => {
                        out.set("witness", Value::Null);
                        if expect_b.is_some() {
                            out.check("b", false);
                        }
                        if *expect_none {
                            out.check("none", true);
                        }
                    }
                    Some(w) => {
                        out.set("witness", witness_json(&w));
                        if let Some(b) = expect_b {
                            out.check("b", &w.b == b);
                        }
                        if *expect_none {
                            out.check("none", false);
                        }
                    }
                }
            }
            Step::Project {
                coords,
                evaluations,
                expect,
            } => {
                let phi = self.phi(evaluations)?;
                let proj = orbit_projection(&phi, coords)?;
                out.set("point", json!(proj.iter().map(|v| render::radical(v, &ts)).collect::<Vec<_>>()));
                if let Some(expect) = expect {
                    let want = self.ctx.radicals(expect)?;
                    out.check("point", proj == want);
                }
            }
            Step::Standardize {
                equation,
                evaluations,
                expect,
                expect_gauge,
                expect_evaluations,
            } => {
                let phi = self.phi(evaluations)?;
                let w = self
                    .witness(&phi)?
                    .ok_or_else(|| CliError::Manifest("no standardness witness for these evaluations".into()))?;
                let l = self.ctx.equation(equation)?;
                let st = standardize(&l, &phi, self.invariants()?.degrees(), &w, self.lambda()?)?;
                out.set("witness", witness_json(&w));
                out.set("equation", render::equation(&st.equation, &ts));
                out.set("gauge", json!(render::monomial(st.gauge.monomial(), &ts)));
                out.set(
                    "evaluations",
                    json!(st.evaluations.values().iter().map(|v| render::radical(v, &ts)).collect::<Vec<_>>()),
                );
                if let Some(e) = expect {
                    out.check("equation", self.compare_equation(0, &st.equation, e)?);
                }
                if let Some(g) = expect_gauge {
                    let want = self.ctx.radicals(&[g])?.remove(0);
                    let ok = match want.tower() {
                        Some(t) => st.gauge.monomial().to_elem(t).map(|v| v == want).unwrap_or(false),
                        None => RadicalMonomial::from_elem(&want, 0).map(|m| m.simplified()) == Some(st.gauge.monomial().simplified()),
                    };
                    out.check("gauge", ok);
                }
                if let Some(e) = expect_evaluations {
                    let want = self.ctx.radicals(e)?;
                    out.check("evaluations", st.evaluations.values() == want.as_slice());
                }
            }
            Step::DeriveOde {
                variable,
                evaluations,
                at,
                expect,
            } => {
                let var = self.ctx.variable(variable)?;
                let texts = evaluations.as_ref().unwrap_or(&self.s.evaluations).clone();
                let phi = EvaluationMap::new(self.ctx.radicals_with(&texts, at)?)?;
                let l = derive_linear_ode(self.connection()?, &phi, var)?;
                out.set("equation", render::equation(&l, &ts));
                if let Some(e) = expect {
                    out.check("equation", self.compare_equation(var, &l, e)?);
                }
            }
            Step::Residual {
                system,
                equation,
                evaluations,
            } => {
                let sys = self.system(system)?.clone();
                let l = self.ctx.equation_in(sys.var(), equation)?;
                let phi = self.phi(evaluations)?;
                let r = symbolic_residual(&l, &sys, self.invariants()?, &phi, self.ctx.degree_bound)?;
                out.set("components", json!(r.len()));
                out.check("zero", r.iter().all(|v| v.is_zero()));
            }
            Step::Bracket { systems, expect_zero } => {
                let a = self.system(&systems[0])?.clone();
                let b = self.system(&systems[1])?.clone();
                let br = lie_bracket(a.rhs(), b.rhs())?;
                let zero = br.iter().all(|v| v.is_zero());
                out.set("zero", json!(zero));
                if !zero {
                    let xs = self.ctx.xs.clone();
                    out.set(
                        "bracket",
                        json!(br.iter().map(|f| render::ratexpr(f, &xs, self.opts.style)).collect::<Vec<_>>()),
                    );
                }
                if *expect_zero {
                    out.check("zero", zero);
                }
            }
            Step::Discriminant {
                poly,
                variable,
                expect,
                expect_squarefree_part,
            } => {
                let var = self.ctx.variable(variable)?;
                let d = discriminant(&self.ctx.tpoly(poly)?, var)?;
                out.set("discriminant", json!(render::poly(&d, &ts)));
                let other = d.vars_used().into_iter().find(|v| *v != var).unwrap_or(0);
                let (lc, factors) = squarefree(&d, other);
                let mut part = Poly::constant(lc.clone());
                let mut listed = Vec::new();
                for (f, m) in &factors {
                    part = part.mul(f);
                    listed.push(json!({"factor": render::poly(f, &ts), "multiplicity": m}));
                }
                out.set("leading", json!(lc.to_string()));
                out.set("factors", json!(listed));
                out.set("squarefree_part", json!(render::poly(&part, &ts)));
                if let Some(e) = expect {
                    out.check("discriminant", d == self.ctx.tpoly(e)?);
                }
                if let Some(e) = expect_squarefree_part {
                    out.check("squarefree_part", part == self.ctx.tpoly(e)?);
                }
            }
            Step::Conjugate {
                variable,
                equation,
                factor,
                expect,
            } => {
                let var = self.ctx.variable(variable)?;
                let l = self.ctx.equation_in(var, equation)?;
                let f = self.ctx.radicals(&[factor])?.remove(0);
                let m = RadicalMonomial::from_elem(&f, var)
                    .ok_or_else(|| CliError::Manifest(format!("`{factor}` is not a radical monomial")))?;
                let c = conjugate_by_factor(&l, &GaugeFactor::new(m, var));
                out.set("equation", render::equation(&c, &ts));
                if let Some(e) = expect {
                    out.check("equation", self.compare_equation(var, &c, e)?);
                }
            }
            Step::Pullback {
                variable,
                equation,
                map,
                expect,
            } => {
                let var = self.ctx.variable(variable)?;
                let l = self.ctx.equation_in(var, equation)?;
                let p = pullback(&l, &self.ctx.ratfn(map)?)?;
                out.set("equation", render::equation(&p, &ts));
                if let Some(e) = expect {
                    out.check("equation", self.compare_equation(var, &p, e)?);
                }
            }
            Step::NumericCheck {
                system,
                equation,
                path,
                params,
                max_drift,
                max_residual,
                trace,
            } => {
                let sys = self.system(system)?.clone();
                let l = self.ctx.equation_in(sys.var(), equation)?;
                let mut values = Vec::with_capacity(self.ctx.space.len());
                for (i, name) in self.ctx.space.iter().enumerate() {
                    let v = match params.get(name) {
                        Some([re, im]) => C64::new(*re, *im),
                        None if i == sys.var() => C64::new(0.0, 0.0),
                        None => return Err(CliError::Manifest(format!("numeric value of `{name}` missing"))),
                    };
                    values.push(v);
                }
                let ns = NumericSystem::new(&sys, &values)?;
                let waypoints: Vec<C64> = path.iter().map(|[re, im]| C64::new(*re, *im)).collect();
                if waypoints.len() < 2 {
                    return Err(CliError::Manifest("a path needs at least two points".into()));
                }
                let opts = NumericOptions::default();
                let x0 = find_fiber_point(&ns, waypoints[0], &opts)?;
                let orbit = integrate_orbit(&ns, &x0, &waypoints, &opts)?;
                let drift = invariant_drift(&ns, &orbit)?;
                let res = check_ode_residual_numeric(&l, &ns, &orbit, &opts)?;
                out.set("steps", json!(orbit.times.len()));
                out.set("drift", json!(drift));
                out.set("residual", json!(res.max_residual));
                out.set("stencil_error", json!(res.stencil_error));
                out.set("samples", json!(res.samples));
                out.check("drift", drift < *max_drift);
                out.check("residual", res.max_residual < *max_residual);
                out.check("stencil", res.stencil_error < *max_residual);
                if let Some(file) = trace {
                    let base = self.opts.trace_dir.clone().unwrap_or_default();
                    let path = base.join(file);
                    let f = std::fs::File::create(&path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                    let names: Vec<String> = (1..=sys.nvars()).map(|i| format!("P{i}")).collect();
                    crate::trace::write_trace(std::io::BufWriter::new(f), &ns, &orbit, &names)?;
                    out.set("trace", json!(file));
                }
            }
        }
        Ok(out)
    }
}

fn sampled_equivariance(sys: &DynSystem, g: &Matrix, points: &[Vec<Cyclo>]) -> Result<bool, CliError> {
    let mut tested = 0;
    for p in points {
        match sys.is_equivariant_at(g, p)? {
            Some(false) => return Ok(false),
            Some(true) => tested += 1,
            None => {}
        }
    }
    Ok(tested > 0)
}

fn witness_json(w: &StandardnessWitness) -> Value {
    json!({
        "a": w.a.iter().map(|(c, e)| json!({"coefficient": c.to_string(), "exponents": render::exponents(e)})).collect::<Vec<_>>(),
        "b": render::exponents(&w.b),
        "alpha": w.alpha.to_string(),
        "beta": w.beta.to_string(),
    })
}
