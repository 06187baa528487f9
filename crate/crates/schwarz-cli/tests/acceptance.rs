// SPDX-License-Identifier: MIT OR Apache-2.0
//! End-to-end acceptance: ten criteria, each printed as one PASS or FAIL
//! line. The criteria run concurrently; each has its own time budget.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use schwarz_cli::{run_scenario, Context, GroupFile, Options, Report, Scenario};
use schwarz_core::expr::parse_radical;
use schwarz_core::group::{Matrix, MatrixGroup};
use schwarz_core::ode::{conjugate_by_factor, pullback, GaugeFactor, LinearODE};
use schwarz_core::radical::RadicalMonomial;
use schwarz_core::{Cyclo, Field, Poly, RatFn};
use serde_json::Value;

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus").join(name)
}

fn scenario(name: &str) -> Scenario {
    Scenario::load(&corpus(name)).unwrap()
}

/// Runs the listed step indices of a bundled scenario; every one of them
/// has to report `pass`.
fn run_steps(name: &str, indices: &[usize]) -> Result<Report, String> {
    let mut s = scenario(name);
    s.steps = indices.iter().map(|i| s.steps[*i].clone()).collect();
    let r = run_scenario(&s, &Options::default()).map_err(|e| e.to_string())?;
    if r.steps().len() != indices.len() {
        return Err(format!("{name}: only {} of {} steps ran: {}", r.steps().len(), indices.len(), r.to_json()));
    }
    for st in r.steps() {
        if st["status"] != "pass" {
            return Err(format!("{name}: step {} ({}) is {}: {st}", st["index"], st["op"], st["status"]));
        }
    }
    Ok(r)
}

/// The expected values of a step as written in the manifest.
fn step_json(name: &str, index: usize) -> Value {
    let v: Value = serde_json::from_str(&std::fs::read_to_string(corpus(name)).unwrap()).unwrap();
    v["steps"][index].clone()
}

fn ensure(cond: bool, what: &str) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.to_string())
    }
}

fn pepin_example_one() -> Result<(), String> {
    run_steps("pepin.json", &[2])?;
    let s = scenario("pepin.json");
    let compared = serde_json::to_string(&step_json("pepin.json", 2)["expect_rhs"]).unwrap() + &s.definitions["Delta"];
    for c in [
        "956301312*X1^15",
        "16187392*X1^10*X2^5",
        "-43776*X1^5*X2^10",
        "19330976710656*X1^30",
        "- 506361069699072*X1^25*X2^5",
        "- 42927147796480*X1^20*X2^10",
        "- 655687680*X1^10*X2^20",
        "+ 133632*X1^5*X2^25",
    ] {
        ensure(compared.contains(c), &format!("coefficient {c} is not part of the comparison"))?;
    }
    Ok(())
}

fn pepin_example_two() -> Result<(), String> {
    let r = run_steps("pepin.json", &[3])?;
    ensure(r.steps()[0]["result"]["autonomous"] == true, "system is not autonomous")?;
    let text = serde_json::to_string(&step_json("pepin.json", 3)["expect_rhs"]).unwrap();
    ensure(text.contains("X1*(65536*X1^10-16896*X1^5*X2^5-11*X2^10)"), "first numerator")?;
    ensure(text.contains("X2*(720896*X1^10-16896*X1^5*X2^5-X2^10)"), "second numerator")?;
    let d = &scenario("pepin.json").definitions["D"];
    ensure(d.starts_with("44814958964215245/35184372088832*X1^70"), "leading coefficient of D")
}

fn projective_equivalence() -> Result<(), String> {
    let ctx = Context::new(1, 0, &[], 200).map_err(|e| e.to_string())?;
    let l = ctx.equation(&["21/100*(t^2-t+1)/(t^2*(t-1)^2)", "0"]).unwrap();
    let f = parse_radical("t^(-1/3)*(t-1)^(-1/3)", &ctx.ts).unwrap();
    let g = GaugeFactor::new(RadicalMonomial::from_elem(&f, 0).ok_or("gauge factor")?, 0);
    let got = conjugate_by_factor(&l, &g);
    let want = ctx.equation(&["-11/900*(t^2-t+1)/(t^2*(t-1)^2)", "2/3*(2*t-1)/(t*(t-1))"]).unwrap();
    ensure(got.coeffs() == want.coeffs(), "conjugated equation")?;
    run_steps("pepin.json", &[9]).map(|_| ())
}

fn pullback_chain() -> Result<(), String> {
    run_steps("pepin.json", &[10, 11])?;
    let ctx = Context::new(1, 0, &[], 200).map_err(|e| e.to_string())?;
    let l = ctx.equation(&["-11/900/(t*(4*t-27))", "2/3*(7*t-27)/(t*(4*t-27))"]).unwrap();
    let hyp = pullback(&l, &ctx.ratfn("27/4*t").unwrap()).unwrap();
    let a0 = hyp.rational_coeffs().ok_or("rational coefficients")?[0].mul(&ctx.ratfn("t*(t-1)").unwrap());
    ensure(a0 == RatFn::constant(Cyclo::int(-11).div(&Cyclo::int(3600)).unwrap()), "constant -11/3600")
}

fn hurwitz() -> Result<(), String> {
    let r = run_steps("hurwitz.json", &[0, 1, 2, 3, 4])?;
    let steps = r.steps();
    ensure(steps[0]["result"]["order"] == 168, "order 168")?;
    ensure(steps[1]["checks"]["invariant"] == true, "invariance of the basic invariants")?;
    let w = &steps[2]["result"]["witness"];
    let a = w["a"].as_array().ok_or("witness A")?;
    ensure(a.len() == 1 && w["beta"] == "0" && w["alpha"] == a[0]["coefficient"], "ratio A/B is t")?;
    ensure(steps[3]["checks"]["point"] == true, "projection (0:1:t)")?;
    let std_eq = serde_json::to_string(&step_json("hurwitz.json", 4)["expect"]).unwrap();
    ensure(std_eq.contains("-85/74088/(t^2*(t-1))"), "standard equation compared")
}

fn a4() -> Result<(), String> {
    run_steps("a4.json", &[3])?;
    ensure(
        step_json("a4.json", 3)["expect"] == serde_json::json!(["-7/576/(t*(t-1))", "1/4*(5*t-3)/(t*(t-1))"]),
        "expected equation",
    )
}

fn hesse() -> Result<(), String> {
    let r = run_steps("hesse.json", &[4, 5, 7, 8, 9])?;
    let text = serde_json::to_string(&step_json("hesse.json", 4)).unwrap() + &step_json("hesse.json", 5).to_string();
    ensure(text.contains("4*t^3-l^2*t^2+18*l*t-4*l^3+27"), "t-flow denominator")?;
    ensure(text.contains("(t^3+9*l*t+54)*(l^2*t^2+4*l^3-4*t^3-18*l*t-27)"), "l-flow denominator")?;
    ensure(r.steps()[2]["checks"]["squarefree_part"] == true, "-16(l^3+27)")?;
    ensure(r.steps()[4]["result"]["zero"] == true, "bracket vanishes")
}

fn fricke() -> Result<(), String> {
    run_steps("fricke.json", &[0, 1, 2, 4])?;
    let text = serde_json::to_string(&scenario_steps("fricke.json")).unwrap();
    ensure(text.contains("-15/2744/(t^2*(t-1))"), "Kato zeroth coefficient")?;
    ensure(text.contains("1377*m^3-19814*m^2-8720*m+352"), "parameter-direction factor")
}

fn scenario_steps(name: &str) -> Value {
    let v: Value = serde_json::from_str(&std::fs::read_to_string(corpus(name)).unwrap()).unwrap();
    v["steps"].clone()
}

fn small_poly(nvars: usize, max_deg: u32) -> impl Strategy<Value = Poly<Cyclo>> {
    prop::collection::vec((prop::collection::vec(0..=max_deg, nvars), -5i64..6), 0..5).prop_map(|terms| {
        let mut p = Poly::zero();
        for (m, c) in terms {
            p.add_term(m, &Cyclo::int(c));
        }
        p
    })
}

fn poly_in_t() -> impl Strategy<Value = RatFn> {
    prop::collection::vec(-4i64..5, 1..4).prop_map(|cs| {
        let mut p = Poly::zero();
        for (k, c) in cs.iter().enumerate() {
            p.add_term(vec![k as u32], &Cyclo::int(*c));
        }
        RatFn::from_poly(p)
    })
}

fn simple_ratfn() -> impl Strategy<Value = RatFn> {
    (-3i64..4, -3i64..4, -3i64..4).prop_map(|(a, b, c)| {
        let pole = RatFn::var(0).sub(&RatFn::constant(Cyclo::int(b)));
        RatFn::constant(Cyclo::int(a)).div(&pole).unwrap().add(&RatFn::constant(Cyclo::int(c)))
    })
}

fn operator() -> impl Strategy<Value = LinearODE> {
    (2usize..4).prop_flat_map(|n| prop::collection::vec(simple_ratfn(), n).prop_map(|cs| LinearODE::from_ratfns(0, cs).unwrap()))
}

fn gauge() -> impl Strategy<Value = GaugeFactor> {
    (-3i64..4, 1i64..5, -3i64..4, 1i64..5, 1i64..4).prop_map(|(p, q, r, s, a)| {
        let ctx = Context::new(1, 0, &[], 200).unwrap();
        let e = parse_radical(&format!("t^({p}/{q})*(t-{a})^({r}/{s})"), &ctx.ts).unwrap();
        GaugeFactor::new(RadicalMonomial::from_elem(&e, 0).unwrap_or_else(RadicalMonomial::one), 0)
    })
}

fn bundled_groups() -> Vec<(String, MatrixGroup)> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(corpus("groups")).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    files
        .iter()
        .map(|f| {
            let g = GroupFile::load(f).unwrap();
            let ctx = Context::new(g.conductor, g.generators[0].len(), &[], 200).unwrap();
            (f.display().to_string(), ctx.group(&g).unwrap().1)
        })
        .collect()
}

fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config {
        failure_persistence: None,
        ..Config::with_cases(cases)
    })
}

fn is_monomial_matrix(g: &Matrix) -> bool {
    g.iter().all(|row| row.iter().filter(|c| !c.is_zero()).count() == 1)
}

fn properties() -> Result<(), String> {
    let groups = bundled_groups();
    ensure(groups.len() == 4, "four bundled groups")?;
    for (name, g) in &groups {
        let cases = if g.order() > 100 { 16 } else { 128 };
        runner(cases)
            .run(&small_poly(g.dim(), 3), |p| {
                let r = g.reynolds(&p).unwrap();
                prop_assert!(g.is_invariant(&r).unwrap());
                prop_assert_eq!(g.reynolds(&r).unwrap(), r);
                Ok(())
            })
            .map_err(|e| format!("{name}: {e}"))?;
    }
    runner(256)
        .run(&(operator(), gauge()), |(l, f)| {
            let back = conjugate_by_factor(&conjugate_by_factor(&l, &f), &f.inverse());
            prop_assert_eq!(back.coeffs(), l.coeffs());
            Ok(())
        })
        .map_err(|e| format!("conjugation: {e}"))?;
    runner(256)
        .run(&(operator(), poly_in_t(), poly_in_t()), |(l, p, q)| {
            prop_assume!(!p.is_constant() && !q.is_constant());
            let step = pullback(&pullback(&l, &p).unwrap(), &q).unwrap();
            let once = pullback(&l, &p.compose(&[q]).unwrap()).unwrap();
            prop_assert_eq!(step.coeffs(), once.coeffs());
            Ok(())
        })
        .map_err(|e| format!("pullback: {e}"))?;
    // every system of every scenario: defining identity and equivariance
    // under each generator of its group
    let mut systems = 0;
    for name in ["pepin.json", "a4.json", "hesse.json", "fricke.json"] {
        let s = scenario(name);
        let mut ctx = Context::for_scenario(&s, None, None).map_err(|e| e.to_string())?;
        ctx.invariants(&s.invariants).map_err(|e| e.to_string())?;
        for (def, text) in &s.definitions {
            ctx.define(def, text).map_err(|e| e.to_string())?;
        }
        let (gens, _) = ctx.group(&s.group_file().unwrap().unwrap()).map_err(|e| e.to_string())?;
        let points = ctx.sample_points(6);
        for def in s.systems.iter().filter(|d| d.name != "degenerate") {
            let sys = ctx.system(def).map_err(|e| format!("{name}/{}: {e}", def.name))?;
            ensure(sys.defining_identity_holds(), &format!("{name}/{}: defining identity", def.name))?;
            for g in &gens {
                let ok = if name == "fricke.json" && !is_monomial_matrix(g) {
                    let verdicts: Vec<_> = points.iter().filter_map(|p| sys.is_equivariant_at(g, p).unwrap()).collect();
                    !verdicts.is_empty() && verdicts.iter().all(|v| *v)
                } else {
                    sys.is_equivariant(g).map_err(|e| e.to_string())?
                };
                ensure(ok, &format!("{name}/{}: equivariance", def.name))?;
            }
            systems += 1;
        }
    }
    ensure(systems == 7, &format!("{systems} systems checked"))
}

fn numeric() -> Result<(), String> {
    for (name, index) in [("pepin.json", 12), ("a4.json", 5), ("hesse.json", 10)] {
        let start = Instant::now();
        let r = run_steps(name, &[index])?;
        let st = &r.steps()[0]["result"];
        ensure(st["drift"].as_f64().unwrap_or(1.0) < 1e-8, &format!("{name}: drift {}", st["drift"]))?;
        ensure(st["residual"].as_f64().unwrap_or(1.0) < 1e-6, &format!("{name}: residual {}", st["residual"]))?;
        ensure(start.elapsed() < Duration::from_secs(60), &format!("{name}: over 60 s"))?;
    }
    Ok(())
}

type Criterion = (u32, &'static str, u64, fn() -> Result<(), String>);

const CRITERIA: [Criterion; 10] = [
    (1, "associated system of the degree-12 form", 60, pepin_example_one),
    (2, "autonomous system of the degree-12 form", 120, pepin_example_two),
    (3, "projective equivalence by a gauge factor", 5, projective_equivalence),
    (4, "pullback chain to the hypergeometric operator", 5, pullback_chain),
    (5, "standardness for the order-168 group", 600, hurwitz),
    (6, "binary tetrahedral derivation", 60, a4),
    (7, "Hesse flows, discriminants and bracket", 900, hesse),
    (8, "Fricke pencil slices and the parameter direction", 3600, fricke),
    (9, "property suites", 3600, properties),
    (10, "numeric oracle", 180, numeric),
];

fn main() {
    let results: Vec<(Result<(), String>, Duration)> = std::thread::scope(|scope| {
        let handles: Vec<_> = CRITERIA
            .iter()
            .map(|(_, _, _, f)| {
                let f = *f;
                scope.spawn(move || {
                    let start = Instant::now();
                    let r = std::panic::catch_unwind(f).unwrap_or_else(|p| {
                        Err(p.downcast_ref::<String>().cloned().unwrap_or_else(|| "panicked".into()))
                    });
                    (r, start.elapsed())
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let mut failed = Vec::new();
    for ((id, what, budget, _), (r, took)) in CRITERIA.iter().zip(results) {
        let over = took > Duration::from_secs(*budget);
        let verdict = match (&r, over) {
            (Ok(()), false) => "PASS".to_string(),
            (Ok(()), true) => format!("FAIL (took {:.1} s, budget {budget} s)", took.as_secs_f64()),
            (Err(e), _) => format!("FAIL ({e})"),
        };
        println!("criterion {id:>2}: {verdict} - {what} [{:.1} s]", took.as_secs_f64());
        if !verdict.starts_with("PASS") {
            failed.push(*id);
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
