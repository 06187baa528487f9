// SPDX-License-Identifier: MIT OR Apache-2.0
//! Monic linear differential operators over radical extensions of
//! rational-function fields, together with gauge conjugation, pullback by
//! a rational map, and power-series checks at ordinary points.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::Poly;
use crate::radical::{RadicalElem, RadicalMonomial};
use crate::ratfn::RatFn;

/// `D^n + a_{n-1} D^{n-1} + … + a_0`, stored as `[a_0, …, a_{n-1}]`.
///
/// `var` is the index of the independent variable among the
/// rational-function variables (index 0 is `t` in every bundled case).
#[derive(Clone, Debug, PartialEq)]
pub struct LinearODE {
    var: usize,
    coeffs: Vec<RadicalElem>,
}

impl LinearODE {
    pub fn new(var: usize, coeffs: Vec<RadicalElem>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Invalid("operator order must be at least one".into()));
        }
        Ok(LinearODE { var, coeffs })
    }

    /// Convenience constructor for rational coefficients.
    pub fn from_ratfns(var: usize, coeffs: Vec<RatFn>) -> Result<Self> {
        Self::new(var, coeffs.into_iter().map(RadicalElem::from_ratfn).collect())
    }

    /// Monic normalization of `c_n D^n + … + c_0` given as `[c_0, …, c_n]`.
    pub fn from_full(var: usize, full: &[RadicalElem]) -> Result<Self> {
        let (lead, rest) = full.split_last().ok_or(Error::Invalid("empty operator".into()))?;
        let inv = lead.inv().ok_or(Error::DivisionByZero)?;
        Self::new(var, rest.iter().map(|c| c.mul(&inv)).collect())
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn var(&self) -> usize {
        self.var
    }

    /// Coefficients `[a_0, …, a_{n-1}]`.
    pub fn coeffs(&self) -> &[RadicalElem] {
        &self.coeffs
    }

    /// Coefficient of `D^k`; one for `k = n`.
    pub fn coeff(&self, k: usize) -> RadicalElem {
        if k == self.order() {
            RadicalElem::one()
        } else {
            self.coeffs.get(k).cloned().unwrap_or_else(RadicalElem::zero)
        }
    }

    /// Coefficients as rational functions, if no radical occurs.
    pub fn rational_coeffs(&self) -> Option<Vec<RatFn>> {
        self.coeffs.iter().map(|c| c.as_ratfn()).collect()
    }

    /// Full coefficient list `[a_0, …, a_{n-1}, 1]`.
    fn full(&self) -> Vec<RadicalElem> {
        let mut v = self.coeffs.clone();
        v.push(RadicalElem::one());
        v
    }

    /// Applies the operator to a function given by its successive
    /// derivatives `[x, x', …, x^{(n)}]`.
    pub fn apply_to_derivatives(&self, ders: &[RadicalElem]) -> Result<RadicalElem> {
        if ders.len() != self.order() + 1 {
            return Err(Error::DimensionMismatch);
        }
        let mut acc = ders[self.order()].clone();
        for (a, d) in self.coeffs.iter().zip(ders) {
            acc = acc.add(&a.mul(d));
        }
        Ok(acc)
    }

    /// Substitutes values for the non-independent variables of every
    /// coefficient (e.g. fixing a parameter).
    pub fn map_coeffs<F: Fn(&RatFn) -> Result<RatFn>>(&self, f: F) -> Result<Self> {
        Self::new(self.var, self.coeffs.iter().map(|c| c.map_coeffs(&f)).collect::<Result<_>>()?)
    }
}

/// `(D − u)` applied on the left of an operator given as a coefficient list
/// (lowest order first).
fn left_shifted_d(op: &[RadicalElem], u: &RadicalElem, var: usize) -> Vec<RadicalElem> {
    let mut out = vec![RadicalElem::zero(); op.len() + 1];
    for (j, c) in op.iter().enumerate() {
        out[j] = out[j].add(&c.diff(var)).sub(&u.mul(c));
        out[j + 1] = out[j + 1].add(c);
    }
    out
}

/// A gauge factor `f = c · ∏ g_j^{e_j}` with rational logarithmic
/// derivative `u = f'/f`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugeFactor {
    monomial: RadicalMonomial,
    var: usize,
    log_derivative: RatFn,
}

impl GaugeFactor {
    pub fn new(monomial: RadicalMonomial, var: usize) -> Self {
        let log_derivative = monomial.log_derivative(var);
        GaugeFactor {
            monomial,
            var,
            log_derivative,
        }
    }

    pub fn monomial(&self) -> &RadicalMonomial {
        &self.monomial
    }

    pub fn log_derivative(&self) -> &RatFn {
        &self.log_derivative
    }

    /// The factor `1/f`.
    pub fn inverse(&self) -> Self {
        Self::new(self.monomial.pow(&BigRational::from_integer(BigInt::from(-1))), self.var)
    }
}

/// The monic operator whose solutions are `f · x` for the solutions `x` of
/// `l`: every `D` in `l` is replaced by `D − f'/f`.
pub fn conjugate_by_factor(l: &LinearODE, f: &GaugeFactor) -> LinearODE {
    let u = RadicalElem::from_ratfn(f.log_derivative.clone());
    let full = l.full();
    let mut power: Vec<RadicalElem> = vec![RadicalElem::one()];
    let mut op: Vec<RadicalElem> = vec![RadicalElem::zero(); l.order() + 1];
    for (k, a) in full.iter().enumerate() {
        if k > 0 {
            power = left_shifted_d(&power, &u, l.var);
        }
        for (j, c) in power.iter().enumerate() {
            op[j] = op[j].add(&a.mul(c));
        }
    }
    op.pop();
    LinearODE { var: l.var, coeffs: op }
}

/// The monic operator in `t` annihilating `r(p(t))` for every solution `r`
/// of `l` (whose independent variable is renamed to `t`).
pub fn pullback(l: &LinearODE, p: &RatFn) -> Result<LinearODE> {
    let var = l.var;
    let dp = p.diff(var);
    if dp.is_zero() {
        return Err(Error::Invalid("pullback by a constant map".into()));
    }
    let coeffs = l
        .rational_coeffs()
        .ok_or_else(|| Error::UnsupportedRadical("pullback of radical coefficients".into()))?;
    let w = RadicalElem::from_ratfn(dp.inv().unwrap());
    // E_k = ((1/p') D)^k as operators in D_t
    let mut e: Vec<RadicalElem> = vec![RadicalElem::one()];
    let mut acc: Vec<RadicalElem> = Vec::new();
    for k in 0..=l.order() {
        let b = if k == l.order() {
            RadicalElem::one()
        } else {
            RadicalElem::from_ratfn(coeffs[k].substitute(var, p)?)
        };
        for (j, c) in e.iter().enumerate() {
            if acc.len() <= j {
                acc.push(RadicalElem::zero());
            }
            acc[j] = acc[j].add(&b.mul(c));
        }
        if k < l.order() {
            let mut next = vec![RadicalElem::zero(); e.len() + 1];
            for (j, c) in e.iter().enumerate() {
                next[j] = next[j].add(&w.mul(&c.diff(var)));
                next[j + 1] = next[j + 1].add(&w.mul(c));
            }
            e = next;
        }
    }
    LinearODE::from_full(var, &acc)
}

/// Dense coefficients of a polynomial in the single variable `var`.
fn univariate(p: &Poly<Cyclo>, var: usize) -> Result<Vec<Cyclo>> {
    let mut out = vec![Cyclo::zero(); p.degree_in(var) as usize + 1];
    for (m, c) in p.terms() {
        if m.iter().enumerate().any(|(i, e)| i != var && *e > 0) {
            return Err(Error::Invalid("series needs univariate coefficients".into()));
        }
        out[m.get(var).copied().unwrap_or(0) as usize] = c.clone();
    }
    Ok(out)
}

/// Truncated power series `Σ c_k h^k` in `h = t − t_0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    pub coeffs: Vec<Cyclo>,
}

impl Series {
    pub fn new(coeffs: Vec<Cyclo>) -> Self {
        Series { coeffs }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn get(&self, k: usize) -> Cyclo {
        self.coeffs.get(k).cloned().unwrap_or_else(Cyclo::zero)
    }

    /// Formal derivative (one coefficient shorter).
    pub fn derivative(&self) -> Series {
        Series::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.mul(&Cyclo::int(k as i64)))
                .collect(),
        )
    }

    /// Product truncated to the shorter length.
    pub fn mul_trunc(&self, other: &Series) -> Series {
        let n = self.len().min(other.len());
        let mut out = vec![Cyclo::zero(); n];
        for i in 0..n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..n - i {
                out[i + j] = out[i + j].add(&self.coeffs[i].mul(&other.coeffs[j]));
            }
        }
        Series::new(out)
    }

    /// Expansion of a univariate rational function at `t_0` to `n` terms.
    pub fn of_ratfn(f: &RatFn, var: usize, t0: &Cyclo, n: usize) -> Result<Series> {
        let num = taylor_shift(&univariate(f.num(), var)?, t0);
        let den = taylor_shift(&univariate(f.den(), var)?, t0);
        if den[0].is_zero() {
            return Err(Error::Invalid("expansion point is singular".into()));
        }
        let inv0 = den[0].inv().unwrap();
        let mut out = vec![Cyclo::zero(); n];
        for k in 0..n {
            let mut s = num.get(k).cloned().unwrap_or_else(Cyclo::zero);
            for j in 1..=k.min(den.len() - 1) {
                s = s.sub(&den[j].mul(&out[k - j]));
            }
            out[k] = s.mul(&inv0);
        }
        Ok(Series::new(out))
    }
}

/// Coefficients of `p(t_0 + h)` in `h`.
fn taylor_shift(p: &[Cyclo], t0: &Cyclo) -> Vec<Cyclo> {
    let mut out: Vec<Cyclo> = vec![Cyclo::zero(); p.len()];
    // Horner in h: out ← out·(h + t0) + c
    for c in p.iter().rev() {
        let mut next = vec![Cyclo::zero(); p.len()];
        for (k, v) in out.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            next[k] = next[k].add(&v.mul(t0));
            if k + 1 < p.len() {
                next[k + 1] = next[k + 1].add(v);
            }
        }
        next[0] = next[0].add(c);
        out = next;
    }
    out
}

fn coeff_series(l: &LinearODE, t0: &Cyclo, n: usize) -> Result<Vec<Series>> {
    let rc = l
        .rational_coeffs()
        .ok_or_else(|| Error::UnsupportedRadical("series of radical coefficients".into()))?;
    rc.iter().map(|a| Series::of_ratfn(a, l.var, t0, n)).collect()
}

/// `L(x)` as a series at the ordinary point `t_0`; the result has
/// `len(x) − n` valid terms.
pub fn apply_operator(l: &LinearODE, x: &Series, t0: &Cyclo) -> Result<Series> {
    let n = l.order();
    if x.len() <= n {
        return Err(Error::Invalid("truncation order below operator order".into()));
    }
    let valid = x.len() - n;
    let a = coeff_series(l, t0, valid)?;
    let mut ders = vec![x.clone()];
    for _ in 0..n {
        let d = ders.last().unwrap().derivative();
        ders.push(d);
    }
    let mut out = Series::new(ders[n].coeffs[..valid].to_vec());
    for (ak, dk) in a.iter().zip(&ders) {
        let prod = ak.mul_trunc(&Series::new(dk.coeffs[..valid].to_vec()));
        for (o, v) in out.coeffs.iter_mut().zip(prod.coeffs) {
            *o = o.add(&v);
        }
    }
    Ok(out)
}

/// The solution series with the given initial Taylor coefficients
/// `x_0, …, x_{n-1}` at the ordinary point `t_0`, to `len` terms.
pub fn solution_series(l: &LinearODE, t0: &Cyclo, initial: &[Cyclo], len: usize) -> Result<Series> {
    let n = l.order();
    if initial.len() != n || len < n {
        return Err(Error::DimensionMismatch);
    }
    let a = coeff_series(l, t0, len)?;
    let mut x: Vec<Cyclo> = initial.to_vec();
    x.resize(len, Cyclo::zero());
    // [h^m] of x^{(k)} is (m+1)…(m+k) x_{m+k}
    let falling = |m: usize, k: usize| -> Cyclo { Cyclo::int(((m + 1)..=(m + k)).product::<usize>() as i64) };
    for m in 0..len - n {
        let mut s = Cyclo::zero();
        for (k, ak) in a.iter().enumerate() {
            for j in 0..=m {
                let idx = j + k;
                if ak.get(m - j).is_zero() || x[idx].is_zero() {
                    continue;
                }
                s = s.add(&ak.get(m - j).mul(&falling(j, k)).mul(&x[idx]));
            }
        }
        x[m + n] = s.neg().mul(&falling(m, n).inv().unwrap());
    }
    Ok(Series::new(x))
}
