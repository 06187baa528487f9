// SPDX-License-Identifier: MIT OR Apache-2.0
//! The order-168 group: invariants, standardization and derivation.

mod common;
use common::*;

use schwarz_core::group::close_group;
use schwarz_core::invariants::weighted_exponents;
use schwarz_core::pipeline::{derive_linear_ode, orbit_projection, standardize, standardness_witness, Connection, EvaluationMap};
use schwarz_core::{Field, RadicalElem};

const HURWITZ: [&str; 3] = [
    "1/24696*(57024*t-40805)/(t^2*(t-1)^2)",
    "1/252*(2592*t^2-2963*t+560)/(t^2*(t-1)^2)",
    "(7*t-4)/(t*(t-1))",
];

const STANDARD: [&str; 3] = [
    "-85/74088/(t^2*(t-1))",
    "1/252*(387*t-56)/(t^2*(t-1))",
    "1/2*(7*t-4)/(t*(t-1))",
];

fn hurwitz_phi() -> EvaluationMap {
    let ts = tsyms(&[], 7);
    EvaluationMap::new(vec![
        RadicalElem::zero(),
        radical("1/((t-1)^3*t^4)", &ts),
        radical("1/((t-1)^7*t^9)", &ts),
    ])
    .unwrap()
}

#[test]
fn group_and_invariants() {
    let g = close_group(&klein_generators(), 1000).unwrap();
    assert_eq!(g.order(), 168);
    assert!(g.is_closed());
    let set = klein_invariants();
    assert_eq!(set.degrees(), &[4, 6, 14]);
    assert!(set.check_invariance(&g).unwrap());
    assert!(!set.jacobian_det().unwrap().is_zero());
}

#[test]
fn witness_projection_and_standard_form() {
    let ts = tsyms(&[], 7);
    let set = klein_invariants();
    let phi = hurwitz_phi();
    let cands = weighted_exponents(&[4, 6, 14], 42);
    let w = standardness_witness(&phi, &cands, 0).unwrap().unwrap();
    assert_eq!(w.b, vec![0, 7, 0]);
    assert_eq!(w.a.len(), 1);
    assert_eq!(w.a[0].1, vec![0, 0, 3]);
    let proj = orbit_projection(&phi, &[vec![9, 1, 0], vec![0, 7, 0], vec![0, 0, 3]]).unwrap();
    assert_eq!(proj, vec![RadicalElem::zero(), RadicalElem::one(), radical("t", &ts)]);

    let hurwitz = ode(&HURWITZ, &ts);
    let st = standardize(&hurwitz, &phi, set.degrees(), &w, 42).unwrap();
    assert_eq!(st.equation.coeffs(), ode(&STANDARD, &ts).coeffs());
    let gauge = radical("(t-1)^(1/2)*t^(2/3)", &ts);
    assert_eq!(st.gauge.monomial().to_elem(gauge.tower().unwrap()).unwrap(), gauge);
    assert_eq!(st.evaluations.values()[0], RadicalElem::zero());
    assert_eq!(st.evaluations.values()[1], RadicalElem::one());
    assert_eq!(st.evaluations.values()[2], radical("t^(1/3)", &ts));
}

#[test]
fn derivation_from_normalized_evaluations() {
    // with P6 scaled by 1728^(-1/7) the orbit relation P14^3 = 1728 P6^7
    // degenerates at t = 1
    let ts = tsyms(&[], 7);
    let conn = Connection::new(&klein_invariants()).unwrap();
    let phi = evaluations(&["0", "1728^(-1/7)", "t^(1/3)"], &ts);
    let l = derive_linear_ode(&conn, &phi, 0).unwrap();
    assert_eq!(l.coeffs(), ode(&STANDARD, &ts).coeffs());
    let phi = evaluations(&["0", "1728^(-1/7)/((t-1)^3*t^4)", "1/((t-1)^7*t^9)"], &ts);
    let l = derive_linear_ode(&conn, &phi, 0).unwrap();
    assert_eq!(l.coeffs(), ode(&HURWITZ, &ts).coeffs());
}
