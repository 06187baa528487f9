// SPDX-License-Identifier: MIT OR Apache-2.0
//! Flat radical extensions `K(r_1, …, r_k)` with `r_j^{m_j} = g_j`, where
//! `K = Q(ζ_N)(t, params)` and every radicand `g_j` lies in `K`.
//!
//! Elements are sums over the monomial basis `∏ r_j^{e_j}` with
//! `0 ≤ e_j < m_j` and [`RatFn`] coefficients. The relation
//! `r_j^{m_j} → g_j` is applied after every product, and the derivation
//! extends that of `K` by `r_j' = r_j · g_j' / (m_j g_j)`.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::solve_field;
use crate::poly::trim_mono;
use crate::ratfn::RatFn;

/// One adjoined root `r = g^{1/m}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Radical {
    pub name: String,
    pub index: u32,
    pub radicand: RatFn,
}

/// Ordered list of adjoined radicals.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Tower {
    radicals: Vec<Radical>,
}

impl Tower {
    pub fn new(radicals: Vec<Radical>) -> Result<Arc<Self>> {
        for r in &radicals {
            if r.index < 2 {
                return Err(Error::UnsupportedRadical(alloc::format!("index {} for {}", r.index, r.name)));
            }
            if r.radicand.is_zero() {
                return Err(Error::UnsupportedRadical(alloc::format!("zero radicand for {}", r.name)));
            }
        }
        Ok(Arc::new(Tower { radicals }))
    }

    pub fn radicals(&self) -> &[Radical] {
        &self.radicals
    }

    pub fn len(&self) -> usize {
        self.radicals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radicals.is_empty()
    }

    /// Dimension of the monomial basis.
    pub fn degree(&self) -> usize {
        self.radicals.iter().map(|r| r.index as usize).product()
    }

    /// Whether `self` is a prefix of `other`.
    pub fn is_prefix_of(&self, other: &Tower) -> bool {
        self.radicals.len() <= other.radicals.len()
            && self.radicals.iter().zip(&other.radicals).all(|(a, b)| a == b)
    }

    /// Monomial basis exponent vectors in a fixed order.
    pub fn basis(&self) -> Vec<Vec<u32>> {
        let mut out: Vec<Vec<u32>> = vec![Vec::new()];
        for r in &self.radicals {
            let mut next = Vec::new();
            for b in &out {
                for e in 0..r.index {
                    let mut v = b.clone();
                    v.push(e);
                    next.push(v);
                }
            }
            out = next;
        }
        for v in out.iter_mut() {
            trim_mono(v);
        }
        out
    }

    /// `base^{p/q}` for a radicand `base` of this tower; `base` must be
    /// adjoined with an index divisible by `q` (or `q = 1`).
    pub fn power(self: &Arc<Self>, base: &RatFn, exp: &BigRational) -> Result<RadicalElem> {
        let q = exp.denom().to_u32().ok_or(Error::UnsupportedRadical("exponent".into()))?;
        let p = exp.numer();
        if q == 1 {
            let e = p.to_i64().ok_or(Error::UnsupportedRadical("exponent".into()))?;
            return Ok(RadicalElem::from_ratfn(ratfn_powi(base, e)?));
        }
        for (j, r) in self.radicals.iter().enumerate() {
            if &r.radicand == base && r.index % q == 0 {
                let k = (p * num_bigint::BigInt::from(r.index / q))
                    .to_i64()
                    .ok_or(Error::UnsupportedRadical("exponent".into()))?;
                let (a, b) = k.div_mod_floor(&(r.index as i64));
                let mut e = vec![0u32; j + 1];
                e[j] = b as u32;
                let c = ratfn_powi(base, a)?;
                return Ok(RadicalElem::monomial(Some(self.clone()), e, c));
            }
        }
        Err(Error::UnsupportedRadical(alloc::format!(
            "no radical of index divisible by {q} for the requested base"
        )))
    }
}

/// `f^e` for an integer `e`.
pub fn ratfn_powi(f: &RatFn, e: i64) -> Result<RatFn> {
    if e >= 0 {
        Ok(Field::pow(f, e as u32))
    } else {
        Ok(Field::pow(&f.inv().ok_or(Error::DivisionByZero)?, (-e) as u32))
    }
}

/// Collects the radicals needed for a set of rational powers before the
/// tower is frozen.
#[derive(Clone, Debug, Default)]
pub struct TowerBuilder {
    entries: Vec<(RatFn, u32, String)>,
}

impl TowerBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Starts from an existing tower (its radicals keep their positions).
    pub fn extending(t: &Tower) -> Self {
        TowerBuilder {
            entries: t
                .radicals
                .iter()
                .map(|r| (r.radicand.clone(), r.index, r.name.clone()))
                .collect(),
        }
    }

    /// Requires `base^{1/q}` to be expressible.
    pub fn require(&mut self, base: &RatFn, q: u32, name: impl Into<String>) {
        if q <= 1 {
            return;
        }
        for e in self.entries.iter_mut() {
            if &e.0 == base {
                if e.1 % q != 0 {
                    e.1 = e.1.lcm(&q);
                }
                return;
            }
        }
        self.entries.push((base.clone(), q, name.into()));
    }

    pub fn finish(self) -> Result<Arc<Tower>> {
        Tower::new(
            self.entries
                .into_iter()
                .map(|(radicand, index, name)| Radical { name, index, radicand })
                .collect(),
        )
    }
}

/// Element of a flat radical tower.
#[derive(Clone, Debug)]
pub struct RadicalElem {
    tower: Option<Arc<Tower>>,
    terms: BTreeMap<Vec<u32>, RatFn>,
}

impl RadicalElem {
    pub fn from_ratfn(r: RatFn) -> Self {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert(Vec::new(), r);
        }
        RadicalElem { tower: None, terms }
    }

    pub fn constant(c: Cyclo) -> Self {
        Self::from_ratfn(RatFn::constant(c))
    }

    /// `c · ∏ r_j^{e_j}` (exponents reduced into range).
    pub fn monomial(tower: Option<Arc<Tower>>, e: Vec<u32>, c: RatFn) -> Self {
        let mut out = RadicalElem {
            tower: tower.clone(),
            terms: BTreeMap::new(),
        };
        if c.is_zero() {
            return out;
        }
        let (k, coef) = reduce_exponents(tower.as_deref(), e, c);
        out.terms.insert(k, coef);
        out
    }

    /// The generator `r_j` of the tower.
    pub fn radical(tower: &Arc<Tower>, j: usize) -> Self {
        let mut e = vec![0u32; j + 1];
        e[j] = 1;
        Self::monomial(Some(tower.clone()), e, RatFn::one())
    }

    pub fn tower(&self) -> Option<&Arc<Tower>> {
        self.tower.as_ref()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &RatFn)> {
        self.terms.iter()
    }

    /// The element as a rational function when no radical occurs.
    pub fn as_ratfn(&self) -> Option<RatFn> {
        match self.terms.len() {
            0 => Some(RatFn::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    /// Single-term view `(exponents, coefficient)`.
    pub fn as_monomial(&self) -> Option<(&Vec<u32>, &RatFn)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// Re-expresses the element in a tower that extends its own.
    pub fn embed(&self, tower: &Arc<Tower>) -> Result<Self> {
        match &self.tower {
            None => Ok(RadicalElem {
                tower: Some(tower.clone()),
                terms: self.terms.clone(),
            }),
            Some(t) if t.is_prefix_of(tower) => Ok(RadicalElem {
                tower: Some(tower.clone()),
                terms: self.terms.clone(),
            }),
            _ => Err(Error::TowerMismatch),
        }
    }

    fn joint_tower(&self, other: &Self) -> Option<Arc<Tower>> {
        match (&self.tower, &other.tower) {
            (None, t) | (t, None) => t.clone(),
            (Some(a), Some(b)) => {
                if Arc::ptr_eq(a, b) || a.is_prefix_of(b) {
                    Some(b.clone())
                } else if b.is_prefix_of(a) {
                    Some(a.clone())
                } else {
                    panic!("{}", Error::TowerMismatch)
                }
            }
        }
    }

    /// Derivative with respect to variable `var` of the base field.
    pub fn diff(&self, var: usize) -> Self {
        let mut out = RadicalElem {
            tower: self.tower.clone(),
            terms: BTreeMap::new(),
        };
        let logs: Vec<RatFn> = match &self.tower {
            Some(t) => t
                .radicals
                .iter()
                .map(|r| {
                    r.radicand
                        .diff(var)
                        .mul(&r.radicand.inv().unwrap())
                        .mul(&RatFn::constant(Cyclo::rational(BigRational::new(1.into(), r.index.into()))))
                })
                .collect(),
            None => Vec::new(),
        };
        for (e, c) in &self.terms {
            let mut d = c.diff(var);
            for (j, ej) in e.iter().enumerate() {
                if *ej > 0 {
                    d = d.add(&c.mul(&logs[j]).mul(&RatFn::constant(Cyclo::int(*ej as i64))));
                }
            }
            if !d.is_zero() {
                out.terms.insert(e.clone(), d);
            }
        }
        out
    }

    /// Applies a map to every coefficient (e.g. a parameter substitution).
    pub fn map_coeffs<F: Fn(&RatFn) -> Result<RatFn>>(&self, f: F) -> Result<Self> {
        let mut out = RadicalElem {
            tower: self.tower.clone(),
            terms: BTreeMap::new(),
        };
        for (e, c) in &self.terms {
            let v = f(c)?;
            if !v.is_zero() {
                out.terms.insert(e.clone(), v);
            }
        }
        Ok(out)
    }

    /// Division `self / other`; verified internally by multiplying back.
    pub fn divide(&self, other: &Self) -> Result<Self> {
        let inv = other.inv().ok_or(Error::DivisionByZero)?;
        Ok(self.mul(&inv))
    }

    fn multiplication_matrix(&self, tower: &Arc<Tower>) -> (Vec<Vec<u32>>, Vec<Vec<RatFn>>) {
        let basis = tower.basis();
        let idx: BTreeMap<Vec<u32>, usize> = basis.iter().cloned().enumerate().map(|(i, b)| (b, i)).collect();
        let n = basis.len();
        let mut m = vec![vec![RatFn::zero(); n]; n];
        for (col, b) in basis.iter().enumerate() {
            let prod = self.mul(&RadicalElem::monomial(Some(tower.clone()), b.clone(), RatFn::one()));
            for (e, c) in &prod.terms {
                m[idx[e]][col] = c.clone();
            }
        }
        (basis, m)
    }
}

fn reduce_exponents(tower: Option<&Tower>, mut e: Vec<u32>, mut c: RatFn) -> (Vec<u32>, RatFn) {
    if let Some(t) = tower {
        for (j, ej) in e.iter_mut().enumerate() {
            let r = &t.radicals[j];
            while *ej >= r.index {
                *ej -= r.index;
                c = c.mul(&r.radicand);
            }
        }
    } else {
        assert!(e.iter().all(|x| *x == 0), "radical exponent without tower");
    }
    trim_mono(&mut e);
    (e, c)
}

impl PartialEq for RadicalElem {
    fn eq(&self, other: &Self) -> bool {
        // keys are trimmed, so elements of prefix-related towers compare
        // directly
        self.terms == other.terms
    }
}

impl Field for RadicalElem {
    fn zero() -> Self {
        RadicalElem {
            tower: None,
            terms: BTreeMap::new(),
        }
    }
    fn one() -> Self {
        Self::from_ratfn(RatFn::one())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        let tower = self.joint_tower(other);
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            match terms.get_mut(e) {
                Some(v) => {
                    let s = v.add(c);
                    if s.is_zero() {
                        terms.remove(e);
                    } else {
                        *v = s;
                    }
                }
                None => {
                    terms.insert(e.clone(), c.clone());
                }
            }
        }
        RadicalElem { tower, terms }
    }
    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    fn mul(&self, other: &Self) -> Self {
        let tower = self.joint_tower(other);
        let mut terms: BTreeMap<Vec<u32>, RatFn> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = crate::poly::mono_mul(ea, eb);
                let (k, c) = reduce_exponents(tower.as_deref(), e, ca.mul(cb));
                match terms.get_mut(&k) {
                    Some(v) => *v = v.add(&c),
                    None => {
                        terms.insert(k, c);
                    }
                }
            }
        }
        terms.retain(|_, v| !v.is_zero());
        RadicalElem { tower, terms }
    }
    fn neg(&self) -> Self {
        RadicalElem {
            tower: self.tower.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect(),
        }
    }
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if let Some((e, c)) = self.as_monomial() {
            // c·∏r^e  ↦  c^{-1} ∏ r^{m-e} / g
            let mut coef = c.inv()?;
            let mut k = Vec::with_capacity(e.len());
            let t = self.tower.as_deref();
            for (j, ej) in e.iter().enumerate() {
                if *ej == 0 {
                    k.push(0);
                } else {
                    let r = &t.unwrap().radicals[j];
                    k.push(r.index - ej);
                    coef = coef.mul(&r.radicand.inv()?);
                }
            }
            return Some(RadicalElem::monomial(self.tower.clone(), k, coef));
        }
        let tower = self.tower.clone()?;
        let (basis, m) = self.multiplication_matrix(&tower);
        let mut rhs = vec![RatFn::zero(); basis.len()];
        rhs[0] = RatFn::one();
        let sol = solve_field(&m, &rhs).ok()?;
        let mut out = RadicalElem {
            tower: Some(tower),
            terms: BTreeMap::new(),
        };
        for (b, c) in basis.into_iter().zip(sol) {
            if !c.is_zero() {
                out.terms.insert(b, c);
            }
        }
        Some(out)
    }
    fn from_rational(q: &BigRational) -> Self {
        Self::from_ratfn(RatFn::from_rational(q))
    }
}

fn is_monic_poly(g: &RatFn) -> bool {
    g.is_polynomial() && !g.is_constant() && g.num().lex_leading().is_some_and(|(_, c)| c.is_one())
}

/// A product `c · ∏ g_j^{e_j}` with rational exponents.
#[derive(Clone, Debug, PartialEq)]
pub struct RadicalMonomial {
    pub constant: Cyclo,
    pub factors: Vec<(RatFn, BigRational)>,
}

impl RadicalMonomial {
    pub fn one() -> Self {
        RadicalMonomial {
            constant: Cyclo::one(),
            factors: Vec::new(),
        }
    }

    /// `self^q`; for fractional `q` a constant other than one becomes a
    /// factor with a rational exponent.
    pub fn pow(&self, q: &BigRational) -> Self {
        if !q.is_integer() && !self.constant.is_one() {
            return self.with_constant_factor().pow(q);
        }
        let constant = if q.is_integer() {
            let e = q.to_integer().to_i64().unwrap_or(0);
            if e >= 0 {
                Field::pow(&self.constant, e as u32)
            } else {
                Field::pow(&self.constant.inv().unwrap(), (-e) as u32)
            }
        } else {
            Cyclo::one()
        };
        RadicalMonomial {
            constant,
            factors: self.factors.iter().map(|(g, e)| (g.clone(), e * q)).collect(),
        }
    }

    /// Logarithmic derivative `Σ e_j g_j'/g_j`, always a rational function.
    pub fn log_derivative(&self, var: usize) -> RatFn {
        let mut u = RatFn::zero();
        for (g, e) in &self.factors {
            let term = g.diff(var).mul(&g.inv().unwrap()).mul(&RatFn::from_rational(e));
            u = u.add(&term);
        }
        u
    }

    /// Registers the radicals needed to represent this monomial.
    pub fn require(&self, b: &mut TowerBuilder, name_prefix: &str) {
        for (i, (g, e)) in self.factors.iter().enumerate() {
            let q = e.denom().to_u32().unwrap_or(1);
            if q > 1 {
                b.require(g, q, alloc::format!("{name_prefix}{i}"));
            }
        }
    }

    /// Value in a tower that contains the needed radicals.
    pub fn to_elem(&self, tower: &Arc<Tower>) -> Result<RadicalElem> {
        let mut acc = RadicalElem::constant(self.constant.clone());
        for (g, e) in &self.factors {
            acc = acc.mul(&tower.power(g, e)?);
        }
        Ok(acc)
    }

    /// Refines the bases to pairwise coprime monic polynomials where
    /// possible, merges equal bases and drops zero exponents.
    pub fn simplified(&self) -> Self {
        fn push(out: &mut Vec<(RatFn, BigRational)>, g: RatFn, e: BigRational) {
            match out.iter_mut().find(|(h, _)| *h == g) {
                Some(slot) => slot.1 += e,
                None => out.push((g, e)),
            }
        }
        let mut out: Vec<(RatFn, BigRational)> = Vec::new();
        for (g, e) in &self.factors {
            if g.is_polynomial() {
                push(&mut out, g.clone(), e.clone());
            } else {
                push(&mut out, RatFn::from_poly(g.num().clone()), e.clone());
                push(&mut out, RatFn::from_poly(g.den().clone()), -e.clone());
            }
        }
        // split pairs with a common factor until all bases are coprime
        loop {
            let mut split = None;
            'outer: for i in 0..out.len() {
                for j in i + 1..out.len() {
                    if !is_monic_poly(&out[i].0) || !is_monic_poly(&out[j].0) {
                        continue;
                    }
                    let g = crate::ratfn::gcd(out[i].0.num(), out[j].0.num());
                    if !g.is_constant() {
                        split = Some((i, j, g));
                        break 'outer;
                    }
                }
            }
            let Some((i, j, g)) = split else { break };
            let (a, ea) = out.remove(j);
            let (b, eb) = out.remove(i);
            // monic inputs have monic cofactors, so no constant is lost
            let a2 = a.num().div_exact(&g).unwrap();
            let b2 = b.num().div_exact(&g).unwrap();
            for (p, e) in [(a2, ea.clone()), (b2, eb.clone()), (g, ea + eb)] {
                if !p.is_constant() {
                    push(&mut out, RatFn::from_poly(p), e);
                }
            }
        }
        out.retain(|(g, e)| !e.is_zero() && !g.is_one());
        RadicalMonomial {
            constant: self.constant.clone(),
            factors: out,
        }
    }

    /// Reads a single-term element `c · ∏ r_j^{e_j}` as a monomial with
    /// squarefree bases in `var`; `None` for sums or zero.
    pub fn from_elem(x: &RadicalElem, var: usize) -> Option<Self> {
        let (e, c) = x.as_monomial()?;
        let mut m = Self::from_ratfn(c, var);
        if let Some(t) = x.tower() {
            for (j, ej) in e.iter().enumerate() {
                if *ej == 0 {
                    continue;
                }
                let r = &t.radicals()[j];
                let q = BigRational::new((*ej).into(), r.index.into());
                let f = Self::from_ratfn(&r.radicand, var).pow(&q);
                m.factors.extend(f.factors);
            }
        }
        Some(m.simplified())
    }

    /// Moves a constant other than one into the factor list so that
    /// fractional powers keep track of it.
    pub fn with_constant_factor(&self) -> Self {
        let mut out = self.clone();
        if !out.constant.is_one() {
            out.factors.push((RatFn::constant(out.constant.clone()), BigRational::one()));
            out.constant = Cyclo::one();
        }
        out
    }

    /// Product of two monomials.
    pub fn mul(&self, other: &Self) -> Self {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        RadicalMonomial {
            constant: self.constant.mul(&other.constant),
            factors,
        }
        .simplified()
    }

    /// Whether all exponents are integers.
    pub fn is_rational(&self) -> bool {
        self.factors.iter().all(|(_, e)| e.is_integer())
    }

    /// Squarefree factorization of a rational function as a monomial with
    /// integer exponents.
    pub fn from_ratfn(f: &RatFn, var: usize) -> Self {
        let (c, fs) = f.squarefree_factors(var);
        RadicalMonomial {
            constant: c,
            factors: fs
                .into_iter()
                .map(|(p, e)| (RatFn::from_poly(p), BigRational::from_integer(e.into())))
                .collect(),
        }
        .simplified()
    }

    /// Whether the constant is one and there are no factors.
    pub fn is_one(&self) -> bool {
        self.constant.is_one() && self.factors.iter().all(|(_, e)| e.is_zero())
    }

    /// Sign-normalizes so that the constant is positive when rational.
    pub fn constant_is_positive_rational(&self) -> bool {
        self.constant.as_rational().is_some_and(|q| q.is_positive())
    }

    pub fn one_exponent() -> BigRational {
        BigRational::one()
    }
}
