// SPDX-License-Identifier: MIT OR Apache-2.0
//! Sparse multivariate polynomials over an exact field.
//!
//! Variables are identified by index. Exponent vectors are stored with
//! trailing zeros removed, so polynomials built over different numbers of
//! variables combine without any explicit embedding and the map key order
//! is the lexicographic order with variable 0 most significant.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::field::Field;

/// Exponent vector with trailing zeros trimmed.
pub type Mono = Vec<u32>;

/// Sparse polynomial with coefficients in `C`; no stored zero coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<C> {
    terms: BTreeMap<Mono, C>,
}

pub(crate) fn trim_mono(m: &mut Mono) {
    while m.last() == Some(&0) {
        m.pop();
    }
}

pub(crate) fn mono_mul(a: &[u32], b: &[u32]) -> Mono {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.to_vec();
    for (o, s) in out.iter_mut().zip(short) {
        *o += s;
    }
    out
}

/// `a / b` if `b` divides `a`.
pub(crate) fn mono_div(a: &[u32], b: &[u32]) -> Option<Mono> {
    if b.len() > a.len() {
        return None;
    }
    let mut out = a.to_vec();
    for (o, s) in out.iter_mut().zip(b) {
        if *o < *s {
            return None;
        }
        *o -= s;
    }
    trim_mono(&mut out);
    Some(out)
}

pub(crate) fn mono_lcm(a: &[u32], b: &[u32]) -> Mono {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| a.get(i).copied().unwrap_or(0).max(b.get(i).copied().unwrap_or(0)))
        .collect()
}

pub(crate) fn mono_degree(a: &[u32]) -> u32 {
    a.iter().sum()
}

pub(crate) fn exp_of(a: &[u32], var: usize) -> u32 {
    a.get(var).copied().unwrap_or(0)
}

/// Graded reverse lexicographic comparison with variable 0 largest.
pub fn grevlex_cmp(a: &[u32], b: &[u32]) -> Ordering {
    let da = mono_degree(a);
    let db = mono_degree(b);
    if da != db {
        return da.cmp(&db);
    }
    let n = a.len().max(b.len());
    for i in (0..n).rev() {
        let (x, y) = (exp_of(a, i), exp_of(b, i));
        if x != y {
            // smaller exponent in the last differing variable is larger
            return y.cmp(&x);
        }
    }
    Ordering::Equal
}

impl<C: Field> Default for Poly<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Field> Poly<C> {
    pub fn zero() -> Self {
        Poly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        let mut p = Self::zero();
        if !c.is_zero() {
            p.terms.insert(Vec::new(), c);
        }
        p
    }

    /// The variable with index `i`.
    pub fn var(i: usize) -> Self {
        let mut m = vec![0; i + 1];
        m[i] = 1;
        Self::monomial(m, C::one())
    }

    pub fn monomial(mut m: Mono, c: C) -> Self {
        trim_mono(&mut m);
        let mut p = Self::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// Builds from (exponent vector, coefficient) pairs, merging duplicates.
    pub fn from_terms<I: IntoIterator<Item = (Mono, C)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in it {
            p.add_term(m, &c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.contains_key(&Vec::new()))
    }

    pub fn is_one(&self) -> bool {
        self.is_constant() && self.constant_term().is_one()
    }

    pub fn constant_term(&self) -> C {
        self.terms.get(&Vec::new()).cloned().unwrap_or_else(C::zero)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &[u32]) -> C {
        let mut k = m.to_vec();
        trim_mono(&mut k);
        self.terms.get(&k).cloned().unwrap_or_else(C::zero)
    }

    /// Adds `c·x^m` in place.
    pub fn add_term(&mut self, mut m: Mono, c: &C) {
        if c.is_zero() {
            return;
        }
        trim_mono(&mut m);
        match self.terms.get_mut(&m) {
            Some(v) => {
                let s = v.add(c);
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    /// Number of variables actually used (one past the largest index).
    pub fn nvars(&self) -> usize {
        self.terms.keys().map(|m| m.len()).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let (big, small) = if self.terms.len() >= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), &c.neg());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn scale(&self, s: &C) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.mul(s))).collect(),
        }
    }

    /// Multiplies by the monomial `c·x^m`.
    pub fn mul_term(&self, m: &[u32], c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (mono_mul(k, m), v.mul(c)))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if other.terms.len() == 1 {
            let (m, c) = other.terms.iter().next().unwrap();
            return self.mul_term(m, c);
        }
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            return other.mul_term(m, c);
        }
        let mut acc: BTreeMap<Mono, C> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = mono_mul(ma, mb);
                let p = ca.mul(cb);
                match acc.get_mut(&m) {
                    Some(v) => *v = v.add(&p),
                    None => {
                        acc.insert(m, p);
                    }
                }
            }
        }
        acc.retain(|_, v| !v.is_zero());
        Poly { terms: acc }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Formal partial derivative with respect to variable `var`.
    pub fn diff(&self, var: usize) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let e = exp_of(m, var);
            if e == 0 {
                continue;
            }
            let mut k = m.clone();
            k[var] -= 1;
            out.add_term(k, &c.mul(&C::from_int(e as i64)));
        }
        out
    }

    /// Total degree (0 for the zero polynomial).
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| mono_degree(m)).max().unwrap_or(0)
    }

    /// Degree in a single variable.
    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| exp_of(m, var)).max().unwrap_or(0)
    }

    /// Total degree restricted to the given variables.
    pub fn degree_in_vars(&self, vars: &[usize]) -> u32 {
        self.terms
            .keys()
            .map(|m| vars.iter().map(|v| exp_of(m, *v)).sum())
            .max()
            .unwrap_or(0)
    }

    /// The common total degree, or an error if the polynomial is not
    /// homogeneous. The zero polynomial has degree 0.
    pub fn homogeneous_degree(&self) -> Result<u32> {
        self.homogeneous_degree_in(None)
    }

    /// Homogeneity restricted to variables `< nvars` when given (other
    /// variables are treated as coefficients).
    pub fn homogeneous_degree_in(&self, nvars: Option<usize>) -> Result<u32> {
        let mut deg = None;
        for m in self.terms.keys() {
            let d: u32 = match nvars {
                Some(n) => m.iter().take(n).sum(),
                None => mono_degree(m),
            };
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => return Err(Error::Inhomogeneous),
                _ => {}
            }
        }
        Ok(deg.unwrap_or(0))
    }

    /// Leading term under lexicographic order (largest key).
    pub fn lex_leading(&self) -> Option<(&Mono, &C)> {
        self.terms.iter().next_back()
    }

    /// Leading term under graded reverse lexicographic order.
    pub fn grevlex_leading(&self) -> Option<(&Mono, &C)> {
        self.terms.iter().max_by(|a, b| grevlex_cmp(a.0, b.0))
    }

    pub fn map_coeffs<D: Field, F: Fn(&C) -> D>(&self, f: F) -> Poly<D> {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &f(c));
        }
        out
    }

    /// Renames variables: index `i` becomes `map(i)`.
    pub fn remap_vars<F: Fn(usize) -> usize>(&self, map: F) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut k: Mono = Vec::new();
            for (i, e) in m.iter().enumerate() {
                if *e == 0 {
                    continue;
                }
                let j = map(i);
                if k.len() <= j {
                    k.resize(j + 1, 0);
                }
                k[j] += e;
            }
            out.add_term(k, c);
        }
        out
    }

    /// Shifts every variable index up by `offset`.
    pub fn shift_vars(&self, offset: usize) -> Self {
        self.remap_vars(|i| i + offset)
    }

    /// Substitutes polynomials for variables: variable `i` becomes
    /// `vals[i]` for `i < vals.len()`; later variables are kept.
    pub fn compose(&self, vals: &[Poly<C>]) -> Self {
        let mut cache: Vec<Vec<Poly<C>>> = vec![Vec::new(); vals.len()];
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut term = Self::one();
            let mut rest: Mono = Vec::new();
            for (i, e) in m.iter().enumerate() {
                if *e == 0 {
                    continue;
                }
                if i < vals.len() {
                    let pw = power_cached(&mut cache[i], &vals[i], *e);
                    term = term.mul(&pw);
                } else {
                    if rest.len() <= i {
                        rest.resize(i + 1, 0);
                    }
                    rest[i] = *e;
                }
            }
            let t = term.mul_term(&rest, c);
            out = out.add(&t);
        }
        out
    }

    /// Evaluates the polynomial in a field, lifting coefficients through
    /// `lift`; every variable used must have a value in `vals`.
    pub fn eval_field<F: Field, L: Fn(&C) -> F>(&self, vals: &[F], lift: L) -> Result<F> {
        let mut cache: Vec<Vec<F>> = vec![Vec::new(); vals.len()];
        let mut acc = F::zero();
        for (m, c) in &self.terms {
            let mut t = lift(c);
            for (i, e) in m.iter().enumerate() {
                if *e == 0 {
                    continue;
                }
                let v = vals.get(i).ok_or_else(|| Error::UnknownVariable(alloc::format!("#{i}")))?;
                let powers = &mut cache[i];
                if powers.is_empty() {
                    powers.push(v.clone());
                }
                while powers.len() < *e as usize {
                    let next = powers.last().unwrap().mul(v);
                    powers.push(next);
                }
                t = t.mul(&powers[*e as usize - 1]);
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    /// Exact multivariate division; `None` when `divisor` does not divide.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        if divisor.is_zero() {
            return None;
        }
        let (lm, lc) = divisor.lex_leading().map(|(m, c)| (m.clone(), c.clone()))?;
        let lci = lc.inv()?;
        if divisor.terms.len() == 1 {
            let mut q = Self::zero();
            for (m, c) in &self.terms {
                let k = mono_div(m, &lm)?;
                q.add_term(k, &c.mul(&lci));
            }
            return Some(q);
        }
        let mut r = self.clone();
        let mut q = Self::zero();
        while let Some((rm, rc)) = r.lex_leading() {
            let k = mono_div(rm, &lm)?;
            let c = rc.mul(&lci);
            r = r.sub(&divisor.mul_term(&k, &c));
            q.add_term(k, &c);
        }
        Some(q)
    }

    /// Coefficients with respect to `var`: `self = Σ_k coeff_k · var^k`
    /// where no `coeff_k` involves `var`.
    pub fn coeffs_in(&self, var: usize) -> BTreeMap<u32, Poly<C>> {
        let mut out: BTreeMap<u32, Poly<C>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = exp_of(m, var);
            let mut k = m.clone();
            if e > 0 {
                k[var] = 0;
            }
            out.entry(e).or_insert_with(Self::zero).add_term(k, c);
        }
        out
    }

    /// Variables that occur with a positive exponent.
    pub fn vars_used(&self) -> Vec<usize> {
        let mut used = Vec::new();
        for m in self.terms.keys() {
            for (i, e) in m.iter().enumerate() {
                if *e > 0 && !used.contains(&i) {
                    used.push(i);
                }
            }
        }
        used.sort_unstable();
        used
    }

    /// Greatest monomial dividing every term.
    pub fn monomial_content(&self) -> Mono {
        let mut it = self.terms.keys();
        let mut g = match it.next() {
            Some(m) => m.clone(),
            None => return Vec::new(),
        };
        for m in it {
            g.truncate(m.len());
            for (gi, mi) in g.iter_mut().zip(m) {
                *gi = (*gi).min(*mi);
            }
        }
        trim_mono(&mut g);
        g
    }

    /// Fails with a diagnostic when the total degree exceeds `bound`.
    pub fn check_degree(&self, bound: u32) -> Result<()> {
        let d = self.total_degree();
        if d > bound {
            Err(Error::DegreeBound { degree: d, bound })
        } else {
            Ok(())
        }
    }
}

fn power_cached<C: Field>(cache: &mut Vec<Poly<C>>, base: &Poly<C>, e: u32) -> Poly<C> {
    if cache.is_empty() {
        cache.push(Poly::one());
    }
    while cache.len() <= e as usize {
        let next = cache.last().unwrap().mul(base);
        cache.push(next);
    }
    cache[e as usize].clone()
}
