// SPDX-License-Identifier: MIT OR Apache-2.0
//! Canonical text for values placed in reports.

use schwarz_core::expr::{print_poly, print_radical, print_ratexpr, print_ratfn, Symbols};
use schwarz_core::ode::LinearODE;
use schwarz_core::radical::RadicalMonomial;
use schwarz_core::{Cyclo, Field, Poly, RadicalElem, RatExpr, RatFn};
use serde_json::{json, Value};

/// Printing options shared by all renderers.
#[derive(Clone, Copy, Debug)]
pub struct Style {
    /// Cancel common factors of numerator and denominator before printing.
    pub reduce: bool,
}

impl Default for Style {
    fn default() -> Self {
        Style { reduce: true }
    }
}

pub fn poly(p: &Poly<Cyclo>, syms: &Symbols) -> String {
    print_poly(p, syms)
}

pub fn ratfn(r: &RatFn, syms: &Symbols) -> String {
    print_ratfn(r, syms)
}

pub fn ratexpr(r: &RatExpr, syms: &Symbols, style: Style) -> String {
    if style.reduce {
        print_ratexpr(&r.reduced(), syms)
    } else {
        print_ratexpr(r, syms)
    }
}

pub fn radical(x: &RadicalElem, syms: &Symbols) -> String {
    match x.as_ratfn() {
        Some(r) => print_ratfn(&r, syms),
        None => print_radical(x, syms),
    }
}

/// Coefficients `a_0..a_{n-1}` of a monic operator.
pub fn equation(l: &LinearODE, syms: &Symbols) -> Value {
    json!({
        "order": l.order(),
        "coefficients": l.coeffs().iter().map(|c| radical(c, syms)).collect::<Vec<_>>(),
    })
}

/// `c * (g_1)^(e_1) * …` in the expression language.
pub fn monomial(m: &RadicalMonomial, syms: &Symbols) -> String {
    let mut parts = Vec::new();
    if !m.constant.is_one() || m.factors.is_empty() {
        parts.push(format!("({})", m.constant));
    }
    for (g, e) in &m.factors {
        let exp = if e.is_integer() { e.numer().to_string() } else { format!("({}/{})", e.numer(), e.denom()) };
        parts.push(format!("({})^{}", print_ratfn(g, syms), exp));
    }
    parts.join("*")
}

pub fn exponents(e: &[u32]) -> Value {
    json!(e)
}
