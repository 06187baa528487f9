// SPDX-License-Identifier: MIT OR Apache-2.0
//! Symbol tables and typed parsing for one scenario.

use std::collections::BTreeMap;

use schwarz_core::expr::{parse, parse_radicals, print_poly, to_poly, to_ratexpr, to_ratfn, Expr, Symbols};
use schwarz_core::group::{close_group, Matrix, MatrixGroup};
use schwarz_core::invariants::{bordered_hessian_invariant, hessian_matrix, InvariantSet};
use schwarz_core::linalg::bareiss_det;
use schwarz_core::ode::LinearODE;
use schwarz_core::pipeline::{build_associated_system, DynSystem, EvaluationMap, DEFAULT_DEGREE_BOUND};
use schwarz_core::{Cyclo, Field, Poly, RadicalElem, RatExpr, RatFn};

use crate::manifest::{GroupFile, InvariantDef, Scenario, SystemDef};
use crate::CliError;

/// Largest group the closure is allowed to enumerate.
pub const GROUP_ORDER_BOUND: usize = 100_000;

/// Parsing environment of a scenario.
///
/// `xs` lists `X1..Xn` followed by the space variables and is used for
/// anything living on the coordinate space; `ts` lists only the space
/// variables and is used for evaluations, targets and equations.
#[derive(Clone, Debug)]
pub struct Context {
    pub conductor: u32,
    pub n: usize,
    pub space: Vec<String>,
    pub xs: Symbols,
    pub ts: Symbols,
    pub degree_bound: u32,
    substitutions: BTreeMap<String, Expr>,
    named: BTreeMap<String, Expr>,
}

fn substitute(e: &Expr, table: &BTreeMap<String, Expr>) -> Expr {
    let sub = |a: &Expr| Box::new(substitute(a, table));
    match e {
        Expr::Num(_) => e.clone(),
        Expr::Sym(s) => table.get(s).cloned().unwrap_or_else(|| e.clone()),
        Expr::Neg(a) => Expr::Neg(sub(a)),
        Expr::Add(a, b) => Expr::Add(sub(a), sub(b)),
        Expr::Sub(a, b) => Expr::Sub(sub(a), sub(b)),
        Expr::Mul(a, b) => Expr::Mul(sub(a), sub(b)),
        Expr::Div(a, b) => Expr::Div(sub(a), sub(b)),
        Expr::Pow(a, q) => Expr::Pow(sub(a), q.clone()),
    }
}

impl Context {
    /// Space variables default to the single variable `t`.
    pub fn new(conductor: u32, n: usize, space: &[String], degree_bound: u32) -> Result<Self, CliError> {
        let space: Vec<String> = if space.is_empty() { vec!["t".into()] } else { space.to_vec() };
        let refs: Vec<&str> = space.iter().map(String::as_str).collect();
        Ok(Context {
            conductor,
            n,
            xs: Symbols::with_coordinates(n, &refs, conductor)?,
            ts: Symbols::new(refs.iter().copied(), conductor)?,
            space,
            degree_bound,
            substitutions: BTreeMap::new(),
            named: BTreeMap::new(),
        })
    }

    /// Context of a manifest; `conductor` overrides the manifest value.
    pub fn for_scenario(s: &Scenario, conductor: Option<u32>, degree_bound: Option<u32>) -> Result<Self, CliError> {
        let mut ctx = Context::new(
            conductor.unwrap_or(s.conductor),
            s.coordinates,
            &s.space,
            degree_bound.or(s.degree_bound).unwrap_or(DEFAULT_DEGREE_BOUND),
        )?;
        for (name, text) in &s.substitutions {
            if ctx.ts.index(name).is_none() {
                return Err(CliError::Unknown { kind: "parameter", name: name.clone() });
            }
            ctx.substitutions.insert(name.clone(), parse(text)?);
        }
        Ok(ctx)
    }

    fn expr(&self, text: &str) -> Result<Expr, CliError> {
        let e = substitute(&parse(text)?, &self.named);
        Ok(substitute(&e, &self.substitutions))
    }

    /// Index of a space variable within `ts` (and `n +` that within `xs`).
    pub fn variable(&self, name: &str) -> Result<usize, CliError> {
        self.ts.index(name).ok_or_else(|| CliError::Unknown { kind: "variable", name: name.into() })
    }

    /// Polynomial on the coordinate space; invariant names may be used.
    pub fn poly(&self, text: &str) -> Result<Poly<Cyclo>, CliError> {
        Ok(to_poly(&self.expr(text)?, &self.xs)?)
    }

    /// Rational expression on the coordinate space.
    pub fn ratexpr(&self, text: &str) -> Result<RatExpr, CliError> {
        Ok(to_ratexpr(&self.expr(text)?, &self.xs)?)
    }

    /// Rational function of the space variables.
    pub fn ratfn(&self, text: &str) -> Result<RatFn, CliError> {
        Ok(to_ratfn(&self.expr(text)?, &self.ts)?)
    }

    /// Polynomial in the space variables only.
    pub fn tpoly(&self, text: &str) -> Result<Poly<Cyclo>, CliError> {
        Ok(to_poly(&self.expr(text)?, &self.ts)?)
    }

    /// Radical expressions in one shared tower.
    pub fn radicals<S: AsRef<str>>(&self, texts: &[S]) -> Result<Vec<RadicalElem>, CliError> {
        self.radicals_with(texts, &BTreeMap::new())
    }

    /// As [`Context::radicals`] with extra substitutions applied first.
    pub fn radicals_with<S: AsRef<str>>(
        &self,
        texts: &[S],
        extra: &BTreeMap<String, String>,
    ) -> Result<Vec<RadicalElem>, CliError> {
        let mut table = BTreeMap::new();
        for (k, v) in extra {
            table.insert(k.clone(), self.expr(v)?);
        }
        let rendered = texts
            .iter()
            .map(|t| Ok(substitute(&self.expr(t.as_ref())?, &table).to_string()))
            .collect::<Result<Vec<_>, CliError>>()?;
        Ok(parse_radicals(&rendered, &self.ts)?)
    }

    pub fn evaluation_map<S: AsRef<str>>(&self, texts: &[S]) -> Result<EvaluationMap, CliError> {
        Ok(EvaluationMap::new(self.radicals(texts)?)?)
    }

    /// Monic operator in the first space variable from `[a_0, …, a_{n-1}]`.
    pub fn equation<S: AsRef<str>>(&self, coeffs: &[S]) -> Result<LinearODE, CliError> {
        self.equation_in(0, coeffs)
    }

    pub fn equation_in<S: AsRef<str>>(&self, var: usize, coeffs: &[S]) -> Result<LinearODE, CliError> {
        let cs = coeffs.iter().map(|c| self.ratfn(c.as_ref())).collect::<Result<Vec<_>, _>>()?;
        Ok(LinearODE::from_ratfns(var, cs)?)
    }

    /// Constant of `Q(ζ_N)` written in the expression language.
    pub fn constant(&self, text: &str) -> Result<Cyclo, CliError> {
        let syms = Symbols::new(Vec::<String>::new(), self.conductor)?;
        let p = to_poly(&self.expr(text)?, &syms)?;
        if !p.is_constant() {
            return Err(CliError::Manifest(format!("`{text}` is not a constant")));
        }
        Ok(p.constant_term())
    }

    pub fn matrix(&self, rows: &[Vec<String>]) -> Result<Matrix, CliError> {
        rows.iter().map(|row| row.iter().map(|e| self.constant(e)).collect()).collect()
    }

    pub fn group(&self, file: &GroupFile) -> Result<(Vec<Matrix>, MatrixGroup), CliError> {
        if file.conductor != self.conductor {
            return Err(CliError::Manifest(format!(
                "group is defined over conductor {} but the scenario uses {}",
                file.conductor, self.conductor
            )));
        }
        let gens = file.generators.iter().map(|g| self.matrix(g)).collect::<Result<Vec<_>, _>>()?;
        let group = close_group(&gens, GROUP_ORDER_BOUND)?;
        Ok((gens, group))
    }

    /// Builds the invariants in order and makes their names usable in
    /// later polynomial expressions.
    pub fn invariants(&mut self, defs: &[InvariantDef]) -> Result<InvariantSet, CliError> {
        let mut names = Vec::new();
        let mut polys: Vec<Poly<Cyclo>> = Vec::new();
        for d in defs {
            let scale = match &d.constant {
                Some(c) => self.constant(c)?,
                None => Cyclo::one(),
            };
            let lookup = |name: &str| -> Result<Poly<Cyclo>, CliError> {
                names
                    .iter()
                    .position(|n: &String| n == name)
                    .map(|i| polys[i].clone())
                    .ok_or_else(|| CliError::Unknown { kind: "invariant", name: name.into() })
            };
            let p = match (&d.poly, &d.hessian, &d.bordered) {
                (Some(text), None, None) => self.poly(text)?.scale(&scale),
                (None, Some(of), None) => bareiss_det(&hessian_matrix(&lookup(of)?, self.n))?.scale(&scale),
                (None, None, Some([p, q])) => bordered_hessian_invariant(&lookup(p)?, &lookup(q)?, &scale)?,
                _ => {
                    return Err(CliError::Manifest(format!(
                        "invariant `{}` needs exactly one of poly, hessian, bordered",
                        d.name
                    )))
                }
            };
            self.named.insert(d.name.clone(), parse(&format!("({})", print_poly(&p, &self.xs)))?);
            names.push(d.name.clone());
            polys.push(p);
        }
        Ok(InvariantSet::new(self.n, names, polys)?)
    }

    /// Registers a named polynomial for use in later expressions.
    pub fn define(&mut self, name: &str, text: &str) -> Result<Poly<Cyclo>, CliError> {
        let p = self.poly(text)?;
        self.named.insert(name.into(), parse(&format!("({})", print_poly(&p, &self.xs)))?);
        Ok(p)
    }

    pub fn system(&self, def: &SystemDef) -> Result<DynSystem, CliError> {
        let primaries = def.primaries.iter().map(|p| self.poly(p)).collect::<Result<Vec<_>, _>>()?;
        let targets = def.targets.iter().map(|t| self.ratfn(t)).collect::<Result<Vec<_>, _>>()?;
        Ok(build_associated_system(self.n, primaries, targets, self.variable(&def.variable)?)?)
    }

    /// Deterministic sample points with small integer entries: the
    /// coordinates and every space variable.
    pub fn sample_points(&self, count: usize) -> Vec<Vec<Cyclo>> {
        let dim = self.n + self.space.len();
        (1..=count as i64)
            .map(|k| (0..dim as i64).map(|j| Cyclo::int((k * (2 * j + 3) + j * j) % 17 - 8 + j)).collect())
            .collect()
    }
}
