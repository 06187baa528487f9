// SPDX-License-Identifier: MIT OR Apache-2.0
//! Pépin's equation: associated systems, gauge transform and pullbacks.

mod common;
use common::*;

use schwarz_core::ode::{conjugate_by_factor, pullback, GaugeFactor};
use schwarz_core::pipeline::{build_associated_system, orbit_projection, EvaluationMap, standardness_witness};
use schwarz_core::radical::RadicalMonomial;
use schwarz_core::{Field, RadicalElem};

const DELTA: &str = "19330976710656*X1^30 - 506361069699072*X1^25*X2^5 - 42927147796480*X1^20*X2^10 - 655687680*X1^10*X2^20 + 133632*X1^5*X2^25 + X2^30";

#[test]
fn non_autonomous_system_matches_printed_form() {
    let s = xsyms(2, &["t"], 1);
    let ts = tsyms(&[], 1);
    let sys = build_associated_system(
        2,
        vec![poly(PEPIN_P1, &s), poly(PEPIN_P2, &s)],
        vec![ratfn("t^4*(t-1)^4", &ts), ratfn("t^6*(t-1)^6*(t^2-t+1)", &ts)],
        0,
    )
    .unwrap();
    assert!(!sys.is_autonomous());
    assert!(sys.defining_identity_holds());
    let f1 = format!(
        "(-65536*X2^4*(956301312*X1^15+16187392*X1^10*X2^5-43776*X1^5*X2^10+X2^15)*(4*t^3*(t-1)^3*(2*t-1)) \
         + 1073741824/5*X1*(65536*X1^10-16896*X1^5*X2^5-11*X2^10)*(t^5*(t-1)^5*(2*t-1)*(7*t^2-7*t+6)))/({DELTA})"
    );
    let f2 = format!(
        "(16777216*X1^4*(1152216*X1^15+11206656*X1^10*X2^5+63232*X1^5*X2^10-57*X2^15)*(4*t^3*(t-1)^3*(2*t-1)) \
         - 1073741824/5*X2*(720896*X1^10-16896*X1^5*X2^5-X2^10)*(t^5*(t-1)^5*(2*t-1)*(7*t^2-7*t+6)))/({DELTA})"
    );
    assert_eq!(sys.rhs()[0], ratexpr(&f1, &s));
    assert_eq!(sys.rhs()[1], ratexpr(&f2, &s));
}

#[test]
fn projection_and_missing_witness() {
    let ts = tsyms(&[], 1);
    let phi = EvaluationMap::new(vec![
        radical("t^4*(t-1)^4", &ts),
        radical("t^6*(t-1)^6*(t^2-t+1)", &ts),
    ])
    .unwrap();
    let proj = orbit_projection(&phi, &[vec![5, 0], vec![0, 3]]).unwrap();
    assert_eq!(proj[0], RadicalElem::one());
    assert_eq!(proj[1], radical("(t^2-t+1)^3/(t^2*(t-1)^2)", &ts));
    assert_eq!(standardness_witness(&phi, &[vec![5, 0], vec![0, 3]], 0).unwrap(), None);
}

#[test]
fn gauge_transform_gives_equation_four() {
    let ts = tsyms(&[], 1);
    let pepin = ode(&["21/100*(t^2-t+1)/(t^2*(t-1)^2)", "0"], &ts);
    let f = RadicalMonomial::from_elem(&radical("t^(-1/3)*(t-1)^(-1/3)", &ts), 0).unwrap();
    let l = conjugate_by_factor(&pepin, &GaugeFactor::new(f, 0));
    let expect = ode(&["-11/900*(t^2-t+1)/(t^2*(t-1)^2)", "2/3*(2*t-1)/(t*(t-1))"], &ts);
    assert_eq!(l.coeffs(), expect.coeffs());
}

#[test]
fn pullbacks_of_equation_five() {
    let ts = tsyms(&[], 1);
    let eq5 = ode(&["-11/900/(t*(4*t-27))", "2/3*(7*t-27)/(t*(4*t-27))"], &ts);
    let eq4 = ode(&["-11/900*(t^2-t+1)/(t^2*(t-1)^2)", "2/3*(2*t-1)/(t*(t-1))"], &ts);
    let p = ratfn("(t^2-t+1)^3/(t^2-t)^2", &ts);
    assert_eq!(pullback(&eq5, &p).unwrap().coeffs(), eq4.coeffs());
    let hyp = pullback(&eq5, &ratfn("27/4*t", &ts)).unwrap();
    let expect = ode(&["-11/3600/(t*(t-1))", "1/6*(7*t-4)/(t*(t-1))"], &ts);
    assert_eq!(hyp.coeffs(), expect.coeffs());
}

#[test]
fn autonomous_system_matches_printed_form() {
    let s = xsyms(2, &["s"], 1);
    let ss = tsyms(&[], 1);
    let p1 = poly(PEPIN_P1, &s);
    let p2 = poly(PEPIN_P2, &s);
    let sys = build_associated_system(2, vec![p1.pow(5), p2.pow(3)], vec![ratfn("1", &ss), ratfn("t", &ss)], 0).unwrap();
    assert!(sys.is_autonomous());
    assert!(sys.defining_identity_holds());
    let f1 = format!("X1*(65536*X1^10-16896*X1^5*X2^5-11*X2^10)/({PEPIN_D})");
    let f2 = format!("X2*(720896*X1^10-16896*X1^5*X2^5-X2^10)/({PEPIN_D})");
    assert_eq!(sys.rhs()[0], ratexpr(&f1, &s));
    // the second component comes out with the opposite overall sign; the
    // printed sign cannot satisfy M·F = (0, 1), which fixes F uniquely
    assert_eq!(sys.rhs()[1], ratexpr(&f2, &s).neg());
    let m = schwarz_core::invariants::jacobian(&[p1.pow(5), p2.pow(3)], 2);
    let as_printed = [ratexpr(&f1, &s), ratexpr(&f2, &s)];
    let row1 = schwarz_core::RatExpr::from_poly(m[1][0].clone())
        .mul(&as_printed[0])
        .add(&schwarz_core::RatExpr::from_poly(m[1][1].clone()).mul(&as_printed[1]));
    assert!(row1 != schwarz_core::RatExpr::one());
}

#[test]
fn degree_twenty_invariant_is_the_hessian() {
    use schwarz_core::invariants::hessian_matrix;
    let s = xsyms(2, &[], 1);
    let h = schwarz_core::linalg::bareiss_det(&hessian_matrix(&poly(PEPIN_P1, &s), 2)).unwrap();
    let inv = poly(PEPIN_P2_INVARIANT, &s);
    assert_eq!(h, inv.scale(&schwarz_core::Cyclo::int(-121)));
    // the displayed degree-20 polynomial is not proportional to it
    let printed = poly(PEPIN_P2, &s);
    assert!(h.sub(&printed.scale(&schwarz_core::Cyclo::int(-121))).num_terms() == 1);
}

#[test]
fn autonomous_equation_is_equation_five() {
    use schwarz_core::invariants::InvariantSet;
    use schwarz_core::pipeline::{derive_linear_ode, derive_linear_ode_direct, Connection};
    let s = xsyms(2, &[], 1);
    let ts = tsyms(&[], 1);
    let set = InvariantSet::new(2, vec!["P1".into(), "P2".into()], vec![poly(PEPIN_P1, &s), poly(PEPIN_P2_INVARIANT, &s)]).unwrap();
    let phi = evaluations(&["1", "t^(1/3)"], &ts);
    let eq5 = ode(&PEPIN_FIVE, &ts);
    let l = derive_linear_ode(&Connection::new(&set).unwrap(), &phi, 0).unwrap();
    assert_eq!(l.coeffs(), eq5.coeffs());
    let sys = pepin_autonomous_system(PEPIN_P2_INVARIANT);
    assert!(sys.defining_identity_holds());
    let direct = derive_linear_ode_direct(&sys, &set, &phi, 400).unwrap();
    assert_eq!(direct.coeffs(), eq5.coeffs());
}
