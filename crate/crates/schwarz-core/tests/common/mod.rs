// SPDX-License-Identifier: MIT OR Apache-2.0
#![allow(dead_code)]

use schwarz_core::expr::{parse_poly, parse_radical, parse_ratexpr, parse_ratfn, Symbols};
use schwarz_core::ode::LinearODE;
use schwarz_core::{Cyclo, Field, Poly, RadicalElem, RatExpr, RatFn};

pub fn xsyms(n: usize, extra: &[&str], conductor: u32) -> Symbols {
    Symbols::with_coordinates(n, extra, conductor).unwrap()
}

pub fn tsyms(extra: &[&str], conductor: u32) -> Symbols {
    let mut names = vec!["t"];
    names.extend_from_slice(extra);
    Symbols::new(names, conductor).unwrap()
}

pub fn poly(text: &str, s: &Symbols) -> Poly<Cyclo> {
    parse_poly(text, s).unwrap_or_else(|e| panic!("{text}: {e}"))
}

pub fn ratexpr(text: &str, s: &Symbols) -> RatExpr {
    parse_ratexpr(text, s).unwrap_or_else(|e| panic!("{text}: {e}"))
}

pub fn ratfn(text: &str, s: &Symbols) -> RatFn {
    parse_ratfn(text, s).unwrap_or_else(|e| panic!("{text}: {e}"))
}

pub fn radical(text: &str, s: &Symbols) -> RadicalElem {
    parse_radical(text, s).unwrap_or_else(|e| panic!("{text}: {e}"))
}

/// Monic operator from coefficient texts `[a_0, …, a_{n-1}]`.
pub fn ode(coeffs: &[&str], s: &Symbols) -> LinearODE {
    LinearODE::from_ratfns(0, coeffs.iter().map(|c| ratfn(c, s)).collect()).unwrap()
}

pub const PEPIN_P1: &str = "X1^11*X2 - 11/256*X1^6*X2^6 - 1/65536*X1*X2^11";
pub const PEPIN_P2: &str = "144027/2097152*X1^20 + 57/64*X1^15*X2^5 + 247/32768*X1^10*X2^10 - 57/4194304*X1^5*X2^15 + 1/4294967296*X2^20";

/// The degree-20 invariant, `-1/121` times the Hessian of `PEPIN_P1`.
/// `PEPIN_P2` differs from it only in the coefficient of `X1^20`.
pub const PEPIN_P2_INVARIANT: &str = "X1^20 + 57/64*X1^15*X2^5 + 247/32768*X1^10*X2^10 - 57/4194304*X1^5*X2^15 + 1/4294967296*X2^20";

pub const PEPIN_D: &str = "44814958964215245/35184372088832*X1^70 - 1478893645819103085/4503599627370496*X1^65*X2^5 \
 - 1507303767249340213172175/2305843009213693952*X1^60*X2^10 - 200131326479517435045/35184372088832*X1^55*X2^15 \
 - 41163273776082534986385/72057594037927936*X1^50*X2^20 - 76393418368808015853255/9223372036854775808*X1^45*X2^25 \
 - 119880246375756138266115/4722366482869645213696*X1^40*X2^30 - 3712236328125/18014398509481984*X1^35*X2^35 \
 - 57031746165946245/147573952589676412928*X1^30*X2^40 + 36602149417814565/18889465931478580854784*X1^25*X2^45 \
 - 20359295143555005/9671406556917033397649408*X1^20*X2^50 + 59979105/147573952589676412928*X1^15*X2^55 \
 - 2925975/302231454903657293676544*X1^10*X2^60 + 495/38685626227668133590597632*X1^5*X2^65 \
 + 15/19807040628566084398385987584*X2^70";

pub const KLEIN_P4: &str = "X1^3*X2 + X2^3*X3 + X3^3*X1";

/// Generators of the order-168 group fixing `KLEIN_P4`, over Q(ζ_7).
pub fn klein_generators() -> Vec<schwarz_core::group::Matrix> {
    let z = |k: i64| Cyclo::zeta_pow(7, k);
    let a = z(4).sub(&z(3));
    let b = z(2).sub(&z(5));
    let c = z(1).sub(&z(6));
    let f = a.add(&b).add(&c).inv().unwrap().neg();
    let (o, l) = (Cyclo::zero(), Cyclo::one());
    vec![
        vec![vec![z(4), o.clone(), o.clone()], vec![o.clone(), z(2), o.clone()], vec![o.clone(), o.clone(), z(1)]],
        vec![vec![o.clone(), o.clone(), l.clone()], vec![l.clone(), o.clone(), o.clone()], vec![o.clone(), l, o]],
        vec![
            vec![b.mul(&f), a.mul(&f), c.mul(&f)],
            vec![a.mul(&f), c.mul(&f), b.mul(&f)],
            vec![c.mul(&f), b.mul(&f), a.mul(&f)],
        ],
    ]
}

/// `P4`, its Hessian `P6` and the bordered Hessian `P14`.
pub fn klein_invariants() -> schwarz_core::invariants::InvariantSet {
    use schwarz_core::invariants::{bordered_hessian_invariant, hessian_invariant, InvariantSet};
    let s = xsyms(3, &[], 7);
    let p4 = poly(KLEIN_P4, &s);
    let q = |a: i64, b: i64| Field::div(&Cyclo::int(a), &Cyclo::int(b)).unwrap();
    let p6 = hessian_invariant(&p4, &q(1, 54)).unwrap();
    let p14 = bordered_hessian_invariant(&p4, &p6, &q(-1, 9)).unwrap();
    InvariantSet::new(3, vec!["P4".into(), "P6".into(), "P14".into()], vec![p4, p6, p14]).unwrap()
}

/// Radical values sharing one tower, ready for an evaluation map.
pub fn evaluations(texts: &[&str], s: &Symbols) -> schwarz_core::pipeline::EvaluationMap {
    let vals = schwarz_core::expr::parse_radicals(texts, s).unwrap_or_else(|e| panic!("{texts:?}: {e}"));
    schwarz_core::pipeline::EvaluationMap::new(vals).unwrap()
}

/// `diag(1, ω, ω²)` and the cyclic shift, over Q(ζ_3).
pub fn hesse_generators() -> Vec<schwarz_core::group::Matrix> {
    let (o, l) = (Cyclo::zero(), Cyclo::one());
    vec![
        vec![vec![l.clone(), o.clone(), o.clone()], vec![o.clone(), Cyclo::zeta_pow(3, 1), o.clone()], vec![o.clone(), o.clone(), Cyclo::zeta_pow(3, 2)]],
        vec![vec![o.clone(), l.clone(), o.clone()], vec![o.clone(), o.clone(), l.clone()], vec![l, o.clone(), o]],
    ]
}

pub fn hesse_invariants() -> schwarz_core::invariants::InvariantSet {
    let s = xsyms(3, &[], 3);
    let ps = ["X1^3+X2^3+X3^3", "X1*X2*X3", "X1^3*X2^3+X2^3*X3^3+X3^3*X1^3"].map(|p| poly(p, &s));
    schwarz_core::invariants::InvariantSet::new(3, vec!["P3".into(), "Q3".into(), "P6".into()], ps.to_vec()).unwrap()
}

pub const HESSE_T: [&str; 3] = [
    "-8/27/(4*t^3-l^2*t^2+18*l*t-4*l^3+27)",
    "8/9*(12*t-l^2)/(4*t^3-l^2*t^2+18*l*t-4*l^3+27)",
    "3*(6*t^2-l^2*t+9*l)/(4*t^3-l^2*t^2+18*l*t-4*l^3+27)",
];

pub const HESSE_L: [&str; 3] = [
    "4/27*(2*t^3-9*l*t-135)/((t^3+9*l*t+54)*(l^2*t^2+4*l^3-4*t^3-18*l*t-27))",
    "2/9*(4*t^5+39*l*t^3+216*l^2*t+297*t^2+2106*l)/((t^3+9*l*t+54)*(l^2*t^2+4*l^3-4*t^3-18*l*t-27))",
    "3*(l*t^5+12*l^2*t^3+42*l^3*t+3*t^4+27*l*t^2+324*l^2-405*t)/((t^3+9*l*t+54)*(l^2*t^2+4*l^3-4*t^3-18*l*t-27))",
];

/// Both Hesse flows: `(t-flow, λ-flow)` in `X1..X3, t, l`.
pub fn hesse_systems() -> (schwarz_core::pipeline::DynSystem, schwarz_core::pipeline::DynSystem) {
    let s = xsyms(3, &["t", "l"], 3);
    let ts = tsyms(&["l"], 3);
    let prim: Vec<_> = ["(X1^3+X2^3+X3^3)*X1*X2*X3", "X1^3*X2^3+X2^3*X3^3+X3^3*X1^3", "X1^2*X2^2*X3^2"]
        .iter()
        .map(|p| poly(p, &s))
        .collect();
    let targets: Vec<_> = ["-l", "t", "1"].iter().map(|p| ratfn(p, &ts)).collect();
    let bt = schwarz_core::pipeline::build_associated_system(3, prim.clone(), targets.clone(), 0).unwrap();
    let bl = schwarz_core::pipeline::build_associated_system(3, prim, targets, 1).unwrap();
    (bt, bl)
}

/// Fricke evaluations of `P4, P6, P14` at parameter text `m` (a number or
/// the symbol `m`).
pub fn fricke_evaluations(m: &str, s: &Symbols) -> schwarz_core::pipeline::EvaluationMap {
    evaluations(
        &[
            &format!("(-({m}))^(-1/9)"),
            &format!("(-({m}))^(1/3)"),
            &format!("2*((27*({m})-44)*t-9*({m}))*(-({m}))^(1/9)"),
        ],
        s,
    )
}

pub const KATO_I: [&str; 3] = ["-15/2744/(t^2*(t-1))", "1/252*(387*t-56)/(t^2*(t-1))", "1/2*(7*t-4)/(t*(t-1))"];
pub const KATO_II: [&str; 3] = ["-15/2744/(t^2*(t-1))", "1/112*(172*t-21)/(t^2*(t-1))", "1/2*(7*t-4)/(t*(t-1))"];

pub const FRICKE_MU_SLICE: [&str; 3] = [
    "-17/250047*(25981560*m^7-4643083377*m^6+5059137096*m^5+27082814356*m^4+12246977888*m^3+4486312704*m^2+569635328*m-3863552)\
     /((27*m+4)^2*(m-4)^2*(1377*m^3-19814*m^2-8720*m+352)*m^3)",
    "1/189*(250958250*m^7-7572554568*m^6+22739097249*m^5+11647351846*m^4-19225904752*m^3-350929536*m^2+350506496*m+7135744)\
     /((27*m+4)^2*(m-4)^2*(1377*m^3-19814*m^2-8720*m+352)*m^2)",
    "2/3*(185895*m^5-3763773*m^4+5350808*m^3+4783200*m^2+41088*m-19712)/((27*m+4)*(m-4)*(1377*m^3-19814*m^2-8720*m+352)*m)",
];

pub fn a4_invariants() -> schwarz_core::invariants::InvariantSet {
    let s = xsyms(2, &[], 4);
    let p6 = poly("X1^5*X2 - X1*X2^5", &s);
    let p8 = poly("X1^8 + 14*X1^4*X2^4 + X2^8", &s);
    schwarz_core::invariants::InvariantSet::new(2, vec!["P6".into(), "P8".into()], vec![p6, p8]).unwrap()
}

/// `P6^4 ↦ t`, `P8^3 ↦ 108`.
pub fn a4_system() -> schwarz_core::pipeline::DynSystem {
    let set = a4_invariants();
    let ts = tsyms(&[], 4);
    let prim = vec![set.polys()[0].pow(4), set.polys()[1].pow(3)];
    schwarz_core::pipeline::build_associated_system(2, prim, vec![ratfn("t", &ts), ratfn("108", &ts)], 0).unwrap()
}

pub const A4_EQUATION: [&str; 2] = ["-7/576/(t*(t-1))", "1/4*(5*t-3)/(t*(t-1))"];
pub const PEPIN_FIVE: [&str; 2] = ["-11/900/(t*(4*t-27))", "2/3*(7*t-27)/(t*(4*t-27))"];

/// `P1^5 ↦ 1`, `P2^3 ↦ t` for the given degree-20 polynomial.
pub fn pepin_autonomous_system(p2: &str) -> schwarz_core::pipeline::DynSystem {
    let s = xsyms(2, &["t"], 1);
    let ts = tsyms(&[], 1);
    let p1 = poly(PEPIN_P1, &s);
    let p2 = poly(p2, &s);
    schwarz_core::pipeline::build_associated_system(2, vec![p1.pow(5), p2.pow(3)], vec![ratfn("1", &ts), ratfn("t", &ts)], 0).unwrap()
}

/// Binary tetrahedral group over Q(i): `diag(i, -i)`, the quarter turn
/// and `(1/2)[[1+i, -1+i], [1+i, 1-i]]`.
pub fn a4_generators() -> Vec<schwarz_core::group::Matrix> {
    let i = Cyclo::zeta_pow(4, 1);
    let (o, l) = (Cyclo::zero(), Cyclo::one());
    let half = Cyclo::int(1).div(&Cyclo::int(2)).unwrap();
    let h = |a: Cyclo| a.mul(&half);
    vec![
        vec![vec![i.clone(), o.clone()], vec![o.clone(), i.neg()]],
        vec![vec![o.clone(), l.clone()], vec![l.neg(), o]],
        vec![
            vec![h(l.add(&i)), h(l.neg().add(&i))],
            vec![h(l.add(&i)), h(l.sub(&i))],
        ],
    ]
}
