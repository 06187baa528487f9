// SPDX-License-Identifier: MIT OR Apache-2.0
//! The Hesse pencil: two commuting flows and their equations.

mod common;
use common::*;

use schwarz_core::group::close_group;
use schwarz_core::pipeline::{derive_linear_ode, discriminant, lie_bracket, symbolic_residual, Connection, DEFAULT_DEGREE_BOUND};
use schwarz_core::ratfn::squarefree;
use schwarz_core::ode::LinearODE;
use schwarz_core::{Cyclo, Field, RadicalElem};

fn hesse_phi() -> schwarz_core::pipeline::EvaluationMap {
    evaluations(&["-l", "1", "t"], &tsyms(&["l"], 3))
}

#[test]
fn group_of_order_27() {
    let g = close_group(&hesse_generators(), 1000).unwrap();
    assert_eq!(g.order(), 27);
    assert!(hesse_invariants().check_invariance(&g).unwrap());
}

#[test]
fn t_flow_equation() {
    let ts = tsyms(&["l"], 3);
    let (sys, _) = hesse_systems();
    assert!(sys.defining_identity_holds());
    let q3sq = schwarz_core::RatExpr::from_poly(poly("X1^2*X2^2*X3^2", &xsyms(3, &["t", "l"], 3)));
    assert!(sys.total_derivative(&q3sq).is_zero());
    let set = hesse_invariants();
    let conn = Connection::new(&set).unwrap();
    let l = derive_linear_ode(&conn, &hesse_phi(), 0).unwrap();
    assert_eq!(l.coeffs(), ode(&HESSE_T, &ts).coeffs());
    let r = symbolic_residual(&l, &sys, &set, &hesse_phi(), DEFAULT_DEGREE_BOUND).unwrap();
    assert!(r.iter().all(RadicalElem::is_zero));
}

#[test]
fn lambda_flow_equation() {
    let ts = tsyms(&["l"], 3);
    let (_, sys) = hesse_systems();
    assert!(sys.defining_identity_holds());
    let conn = Connection::new(&hesse_invariants()).unwrap();
    let l = derive_linear_ode(&conn, &hesse_phi(), 1).unwrap();
    let expect = LinearODE::from_ratfns(1, HESSE_L.iter().map(|c| ratfn(c, &ts)).collect()).unwrap();
    assert_eq!(l.coeffs(), expect.coeffs());
}

#[test]
fn discriminants() {
    let ts = tsyms(&["l"], 3);
    let dt = discriminant(&poly("4*t^3-l^2*t^2+18*l*t-4*l^3+27", &ts), 0).unwrap();
    // the standard discriminant carries the cube; its squarefree part is
    // the displayed -16(l^3+27)
    assert_eq!(dt, poly("-16*(l^3+27)^3", &ts));
    let (lc, factors) = squarefree(&dt, 1);
    assert_eq!(lc, Cyclo::int(-16));
    assert_eq!(factors, vec![(poly("l^3+27", &ts), 3)]);
    let dl = discriminant(&poly("(t^3+9*l*t+54)*(l^2*t^2+4*l^3-4*t^3-18*l*t-27)", &ts), 1).unwrap();
    assert_eq!(dl, poly("16*(5*t^3-864)^2*(t^3-27)^7", &ts));
}

#[test]
fn flows_commute() {
    let (ft, fl) = hesse_systems();
    let br = lie_bracket(ft.rhs(), fl.rhs()).unwrap();
    assert!(br.iter().all(|b| b.is_zero()));
}
