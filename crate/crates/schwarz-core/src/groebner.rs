// SPDX-License-Identifier: MIT OR Apache-2.0
//! Ideals, Buchberger's algorithm and normal forms under graded reverse
//! lexicographic order (variable 0 largest).
//!
//! Coefficients live in any [`Field`]; orbit ideals use [`RatFn`] so that
//! `t` and parameters behave as elements of the coefficient field.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::cyclo::Cyclo;
use crate::error::Result;
use crate::field::Field;
use crate::poly::{grevlex_cmp, mono_div, mono_lcm, Mono, Poly};
use crate::ratfn::RatFn;

fn leading<F: Field>(p: &Poly<F>) -> Option<(Mono, F)> {
    p.grevlex_leading().map(|(m, c)| (m.clone(), c.clone()))
}

fn monic<F: Field>(p: &Poly<F>) -> Poly<F> {
    match leading(p) {
        Some((_, c)) if !c.is_one() => p.scale(&c.inv().unwrap()),
        _ => p.clone(),
    }
}

/// Full reduction of `p` modulo the list `g` (not necessarily a basis).
pub fn reduce<F: Field>(p: &Poly<F>, g: &[Poly<F>]) -> Poly<F> {
    let leads: Vec<(Mono, F)> = g.iter().map(|q| leading(q).expect("nonzero generator")).collect();
    let mut rest = p.clone();
    let mut out = Poly::zero();
    while let Some((m, c)) = leading(&rest) {
        let hit = leads.iter().enumerate().find_map(|(i, (lm, _))| mono_div(&m, lm).map(|k| (i, k)));
        match hit {
            Some((i, k)) => {
                let f = c.mul(&leads[i].1.inv().unwrap());
                rest = rest.sub(&g[i].mul_term(&k, &f));
            }
            None => {
                out.add_term(m.clone(), &c);
                rest = rest.sub(&Poly::monomial(m, c));
            }
        }
    }
    out
}

fn s_poly<F: Field>(a: &Poly<F>, b: &Poly<F>) -> Poly<F> {
    let (ma, ca) = leading(a).unwrap();
    let (mb, cb) = leading(b).unwrap();
    let l = mono_lcm(&ma, &mb);
    let fa = mono_div(&l, &ma).unwrap();
    let fb = mono_div(&l, &mb).unwrap();
    a.mul_term(&fa, &ca.inv().unwrap())
        .sub(&b.mul_term(&fb, &cb.inv().unwrap()))
}

fn coprime(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0)
}

/// Reduced Gröbner basis of the ideal generated by `gens`.
///
/// Aborts with [`Error::DegreeBound`] if an intermediate polynomial
/// exceeds `degree_bound` in total degree.
pub fn groebner_basis<F: Field>(gens: &[Poly<F>], degree_bound: u32) -> Result<Vec<Poly<F>>> {
    let mut g: Vec<Poly<F>> = gens.iter().filter(|p| !p.is_zero()).map(monic).collect();
    for p in &g {
        p.check_degree(degree_bound)?;
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for j in 0..g.len() {
        for i in 0..j {
            pairs.push((i, j));
        }
    }
    while let Some(idx) = select_pair(&g, &pairs) {
        let (i, j) = pairs.swap_remove(idx);
        let li = leading(&g[i]).unwrap().0;
        let lj = leading(&g[j]).unwrap().0;
        if coprime(&li, &lj) {
            continue;
        }
        let s = s_poly(&g[i], &g[j]);
        let r = reduce(&s, &g);
        if r.is_zero() {
            continue;
        }
        r.check_degree(degree_bound)?;
        let r = monic(&r);
        let k = g.len();
        g.push(r);
        for i in 0..k {
            pairs.push((i, k));
        }
    }
    Ok(interreduce(g))
}

/// Normal strategy: the pair with the smallest lcm of leading monomials.
fn select_pair<F: Field>(g: &[Poly<F>], pairs: &[(usize, usize)]) -> Option<usize> {
    let mut best: Option<(usize, Mono)> = None;
    for (k, (i, j)) in pairs.iter().enumerate() {
        let l = mono_lcm(&leading(&g[*i]).unwrap().0, &leading(&g[*j]).unwrap().0);
        match &best {
            Some((_, b)) if grevlex_cmp(&l, b) != Ordering::Less => {}
            _ => best = Some((k, l)),
        }
    }
    best.map(|(k, _)| k)
}

fn interreduce<F: Field>(mut g: Vec<Poly<F>>) -> Vec<Poly<F>> {
    // drop elements whose leading monomial is divisible by another's
    let mut keep: Vec<Poly<F>> = Vec::new();
    g.sort_by(|a, b| grevlex_cmp(&leading(a).unwrap().0, &leading(b).unwrap().0));
    for p in g {
        let lp = leading(&p).unwrap().0;
        if keep.iter().any(|q| mono_div(&lp, &leading(q).unwrap().0).is_some()) {
            continue;
        }
        keep.push(p);
    }
    let mut out = Vec::with_capacity(keep.len());
    for i in 0..keep.len() {
        let others: Vec<Poly<F>> = keep.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, q)| q.clone()).collect();
        let (lm, lc) = leading(&keep[i]).unwrap();
        let tail = keep[i].sub(&Poly::monomial(lm.clone(), lc.clone()));
        let r = Poly::monomial(lm, lc).add(&reduce(&tail, &others));
        out.push(monic(&r));
    }
    out.sort_by(|a, b| grevlex_cmp(&leading(a).unwrap().0, &leading(b).unwrap().0));
    out
}

/// An ideal with its reduced Gröbner basis computed at construction.
#[derive(Clone, Debug, PartialEq)]
pub struct Ideal<F> {
    generators: Vec<Poly<F>>,
    basis: Vec<Poly<F>>,
}

impl<F: Field> Ideal<F> {
    pub fn new(generators: Vec<Poly<F>>, degree_bound: u32) -> Result<Self> {
        let basis = groebner_basis(&generators, degree_bound)?;
        Ok(Ideal { generators, basis })
    }

    pub fn generators(&self) -> &[Poly<F>] {
        &self.generators
    }

    pub fn basis(&self) -> &[Poly<F>] {
        &self.basis
    }

    /// Whether the ideal is the whole ring.
    pub fn is_unit(&self) -> bool {
        self.basis.iter().any(|p| p.is_constant() && !p.is_zero())
    }

    pub fn normal_form(&self, p: &Poly<F>) -> Poly<F> {
        if self.is_unit() {
            return Poly::zero();
        }
        reduce(p, &self.basis)
    }

    pub fn contains(&self, p: &Poly<F>) -> bool {
        self.normal_form(p).is_zero()
    }
}

/// Normal form of `p` modulo `ideal`.
pub fn groebner_normal_form<F: Field>(p: &Poly<F>, ideal: &Ideal<F>) -> Poly<F> {
    ideal.normal_form(p)
}

/// Views a polynomial in variables `0..n` (the `X`s) followed by
/// coefficient variables as a polynomial in the `X`s over `RatFn`, with the
/// coefficient variables renumbered from zero.
pub fn split_coefficients(p: &Poly<Cyclo>, n: usize) -> Poly<RatFn> {
    let mut out: Poly<RatFn> = Poly::zero();
    for (m, c) in p.terms() {
        let xs: Mono = m.iter().take(n).copied().collect();
        let rest: Mono = m.iter().skip(n).copied().collect();
        out.add_term(xs, &RatFn::from_poly(Poly::monomial(rest, c.clone())));
    }
    out
}
