// SPDX-License-Identifier: MIT OR Apache-2.0
//! Reduced rational functions and multivariate polynomial GCD.
//!
//! [`RatFn`] is the coefficient field `Q(ζ_N)(t, params)`: a quotient of
//! coprime polynomials whose denominator has lexicographic leading
//! coefficient one, so equal functions have equal representations.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::{exp_of, mono_div, Poly};

/// Scales `p` so that its lexicographic leading coefficient is one.
pub fn make_monic<C: Field>(p: &Poly<C>) -> Poly<C> {
    match p.lex_leading() {
        None => Poly::zero(),
        Some((_, c)) if c.is_one() => p.clone(),
        Some((_, c)) => p.scale(&c.inv().expect("nonzero leading coefficient")),
    }
}

/// Greatest common divisor, normalized monic; `gcd(0, 0) = 0`.
///
/// Recursive primitive remainder sequence: the content with respect to the
/// main variable is handled by recursion on the remaining variables, and
/// each pseudo-remainder is replaced by its monic primitive part.
pub fn gcd<C: Field>(a: &Poly<C>, b: &Poly<C>) -> Poly<C> {
    if a.is_zero() {
        return make_monic(b);
    }
    if b.is_zero() {
        return make_monic(a);
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    // Pull out the common monomial factor first; it is cheap and common.
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let common: Vec<u32> = ma.iter().zip(mb.iter()).map(|(x, y)| *x.min(y)).collect();
    let a1 = a.div_exact(&Poly::monomial(ma.clone(), C::one())).unwrap();
    let b1 = b.div_exact(&Poly::monomial(mb.clone(), C::one())).unwrap();
    let g = gcd_nomono(&a1, &b1);
    make_monic(&g.mul_term(&common, &C::one()))
}

fn gcd_nomono<C: Field>(a: &Poly<C>, b: &Poly<C>) -> Poly<C> {
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    let mut vars = a.vars_used();
    for v in b.vars_used() {
        if !vars.contains(&v) {
            vars.push(v);
        }
    }
    vars.sort_unstable();
    let v = *vars.last().unwrap();
    let da = a.degree_in(v);
    let db = b.degree_in(v);
    if da == 0 {
        return gcd(a, &content(b, v));
    }
    if db == 0 {
        return gcd(&content(a, v), b);
    }
    let ca = content(a, v);
    let cb = content(b, v);
    let g0 = gcd(&ca, &cb);
    let mut f1 = primitive_part(&a.div_exact(&ca).unwrap(), v);
    let mut f2 = primitive_part(&b.div_exact(&cb).unwrap(), v);
    if f1.degree_in(v) < f2.degree_in(v) {
        core::mem::swap(&mut f1, &mut f2);
    }
    loop {
        let r = pseudo_rem(&f1, &f2, v);
        if r.is_zero() {
            break;
        }
        if r.degree_in(v) == 0 {
            f2 = Poly::one();
            break;
        }
        f1 = f2;
        f2 = primitive_part(&r, v);
    }
    make_monic(&g0.mul(&f2))
}

/// GCD of the coefficients of `p` viewed as a polynomial in `var`.
pub fn content<C: Field>(p: &Poly<C>, var: usize) -> Poly<C> {
    let mut g = Poly::zero();
    for (_, c) in p.coeffs_in(var) {
        g = gcd(&g, &c);
        if g.is_one() {
            break;
        }
    }
    g
}

/// `p / content(p, var)`, scaled monic.
pub fn primitive_part<C: Field>(p: &Poly<C>, var: usize) -> Poly<C> {
    if p.is_zero() {
        return Poly::zero();
    }
    let c = content(p, var);
    make_monic(&p.div_exact(&c).expect("content divides"))
}

/// Leading coefficient of `p` as a polynomial in `var`.
pub fn leading_coeff_in<C: Field>(p: &Poly<C>, var: usize) -> (u32, Poly<C>) {
    let d = p.degree_in(var);
    let mut lc = Poly::zero();
    for (m, c) in p.terms() {
        if exp_of(m, var) == d {
            let mut k = m.clone();
            if d > 0 {
                k[var] = 0;
            }
            lc.add_term(k, c);
        }
    }
    (d, lc)
}

/// Pseudo-remainder of `a` by `b` in `var` (up to a factor that is a power
/// of the leading coefficient of `b`).
pub fn pseudo_rem<C: Field>(a: &Poly<C>, b: &Poly<C>, var: usize) -> Poly<C> {
    let (db, lb) = leading_coeff_in(b, var);
    let mut r = a.clone();
    while !r.is_zero() {
        let (dr, lr) = leading_coeff_in(&r, var);
        if dr < db {
            break;
        }
        let mut shift = alloc::vec![0u32; var + 1];
        shift[var] = dr - db;
        r = r.mul(&lb).sub(&b.mul(&lr).mul_term(&shift, &C::one()));
    }
    r
}

/// Element of `Q(ζ_N)(x_0, …, x_k)` in lowest terms.
#[derive(Clone, Debug, PartialEq)]
pub struct RatFn {
    num: Poly<Cyclo>,
    den: Poly<Cyclo>,
}

impl RatFn {
    /// Builds `num/den` and reduces it.
    pub fn new(num: Poly<Cyclo>, den: Poly<Cyclo>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Poly<Cyclo>, den: Poly<Cyclo>) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = gcd(&num, &den);
            if g.is_one() {
                (num, den)
            } else {
                (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap())
            }
        };
        let lc = den.lex_leading().unwrap().1.clone();
        if lc.is_one() {
            RatFn { num, den }
        } else {
            let s = lc.inv().unwrap();
            RatFn {
                num: num.scale(&s),
                den: den.scale(&s),
            }
        }
    }

    pub fn from_poly(p: Poly<Cyclo>) -> Self {
        RatFn {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn constant(c: Cyclo) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn var(i: usize) -> Self {
        Self::from_poly(Poly::var(i))
    }

    pub fn num(&self) -> &Poly<Cyclo> {
        &self.num
    }

    pub fn den(&self) -> &Poly<Cyclo> {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    /// The value when constant.
    pub fn as_constant(&self) -> Option<Cyclo> {
        if self.is_constant() {
            Some(self.num.constant_term().mul(&self.den.constant_term().inv().unwrap()))
        } else {
            None
        }
    }

    /// Whether `var` occurs.
    pub fn depends_on(&self, var: usize) -> bool {
        self.num.degree_in(var) > 0 || self.den.degree_in(var) > 0
    }

    /// Partial derivative with respect to `var`.
    pub fn diff(&self, var: usize) -> Self {
        let dn = self.num.diff(var);
        let dd = self.den.diff(var);
        if dd.is_zero() {
            return Self::reduce(dn, self.den.clone());
        }
        Self::reduce(
            dn.mul(&self.den).sub(&self.num.mul(&dd)),
            self.den.mul(&self.den),
        )
    }

    /// Substitutes rational functions for variables (variable `i` becomes
    /// `vals[i]`; later variables are kept).
    pub fn compose(&self, vals: &[RatFn]) -> Result<Self> {
        let n = compose_poly(&self.num, vals);
        let d = compose_poly(&self.den, vals);
        n.div(&d).ok_or(Error::DivisionByZero)
    }

    /// Replaces variable `var` by `val`.
    pub fn substitute(&self, var: usize, val: &RatFn) -> Result<Self> {
        let nv = self.num.nvars().max(self.den.nvars()).max(var + 1);
        let vals: Vec<RatFn> = (0..nv)
            .map(|i| if i == var { val.clone() } else { RatFn::var(i) })
            .collect();
        self.compose(&vals)
    }

    /// Multiplicative decomposition of numerator and denominator into
    /// monic squarefree factors with integer multiplicities (negative for
    /// the denominator) and a constant.
    pub fn squarefree_factors(&self, var: usize) -> (Cyclo, Vec<(Poly<Cyclo>, i64)>) {
        let (cn, fnum) = squarefree(&self.num, var);
        let (cd, fden) = squarefree(&self.den, var);
        let mut out: Vec<(Poly<Cyclo>, i64)> = fnum.into_iter().map(|(p, e)| (p, e as i64)).collect();
        out.extend(fden.into_iter().map(|(p, e)| (p, -(e as i64))));
        (cn.mul(&cd.inv().unwrap()), out)
    }
}

/// Squarefree decomposition (Yun) with respect to `var`, with the content
/// in `var` kept as a single factor of multiplicity one.
/// Returns the constant and the list of (monic factor, multiplicity).
pub fn squarefree(p: &Poly<Cyclo>, var: usize) -> (Cyclo, Vec<(Poly<Cyclo>, u32)>) {
    let lc = p.lex_leading().map(|(_, c)| c.clone()).unwrap_or_else(Cyclo::one);
    let f = make_monic(p);
    let mut out: BTreeMap<u32, Poly<Cyclo>> = BTreeMap::new();
    // monomial factors are recorded separately so that x^k gives (x, k)
    let mono = f.monomial_content();
    let f = f.div_exact(&Poly::monomial(mono.clone(), Cyclo::one())).unwrap();
    for (i, e) in mono.iter().enumerate() {
        if *e > 0 {
            let entry = out.entry(*e).or_insert_with(Poly::one);
            *entry = entry.mul(&Poly::var(i));
        }
    }
    let cont = content(&f, var);
    let f = f.div_exact(&cont).unwrap();
    if !cont.is_constant() {
        let entry = out.entry(1).or_insert_with(Poly::one);
        *entry = entry.mul(&cont);
    }
    if f.degree_in(var) > 0 {
        let df = f.diff(var);
        let a = gcd(&f, &df);
        let mut b = f.div_exact(&a).unwrap();
        let mut c = df.div_exact(&a).unwrap();
        let mut i = 1u32;
        while !b.is_constant() {
            let d = c.sub(&b.diff(var));
            let g = gcd(&b, &d);
            if !g.is_constant() {
                let entry = out.entry(i).or_insert_with(Poly::one);
                *entry = entry.mul(&g);
            }
            b = b.div_exact(&g).unwrap();
            c = d.div_exact(&g).unwrap();
            i += 1;
        }
    }
    (lc, out.into_iter().map(|(e, p)| (make_monic(&p), e)).collect())
}

fn compose_poly(p: &Poly<Cyclo>, vals: &[RatFn]) -> RatFn {
    let mut acc = RatFn::zero();
    let mut cache: Vec<Vec<RatFn>> = alloc::vec![Vec::new(); vals.len()];
    for (m, c) in p.terms() {
        let mut term = RatFn::constant(c.clone());
        let mut rest: Vec<u32> = Vec::new();
        for (i, e) in m.iter().enumerate() {
            if *e == 0 {
                continue;
            }
            if i < vals.len() {
                let cache_i = &mut cache[i];
                if cache_i.is_empty() {
                    cache_i.push(RatFn::one());
                }
                while cache_i.len() <= *e as usize {
                    let next = cache_i.last().unwrap().mul(&vals[i]);
                    cache_i.push(next);
                }
                term = term.mul(&cache_i[*e as usize]);
            } else {
                if rest.len() <= i {
                    rest.resize(i + 1, 0);
                }
                rest[i] = *e;
            }
        }
        if !rest.is_empty() {
            term = term.mul(&RatFn::from_poly(Poly::monomial(rest, Cyclo::one())));
        }
        acc = acc.add(&term);
    }
    acc
}

impl Field for RatFn {
    fn zero() -> Self {
        RatFn {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }
    fn one() -> Self {
        RatFn {
            num: Poly::one(),
            den: Poly::one(),
        }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return Self::reduce(self.num.add(&other.num), self.den.clone());
        }
        let g = gcd(&self.den, &other.den);
        let a = self.den.div_exact(&g).unwrap();
        let b = other.den.div_exact(&g).unwrap();
        Self::reduce(
            self.num.mul(&b).add(&other.num.mul(&a)),
            a.mul(&other.den),
        )
    }
    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.den.is_one() && other.den.is_one() {
            return RatFn {
                num: self.num.mul(&other.num),
                den: Poly::one(),
            };
        }
        // cross-cancel before multiplying
        let g1 = gcd(&self.num, &other.den);
        let g2 = gcd(&other.num, &self.den);
        let n1 = self.num.div_exact(&g1).unwrap();
        let d2 = other.den.div_exact(&g1).unwrap();
        let n2 = other.num.div_exact(&g2).unwrap();
        let d1 = self.den.div_exact(&g2).unwrap();
        let num = n1.mul(&n2);
        let den = d1.mul(&d2);
        let lc = den.lex_leading().unwrap().1.clone();
        let s = lc.inv().unwrap();
        RatFn {
            num: num.scale(&s),
            den: den.scale(&s),
        }
    }
    fn neg(&self) -> Self {
        RatFn {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let lc = self.num.lex_leading().unwrap().1.clone();
        let s = lc.inv().unwrap();
        Some(RatFn {
            num: self.den.scale(&s),
            den: self.num.scale(&s),
        })
    }
    fn from_rational(q: &num_rational::BigRational) -> Self {
        Self::constant(Cyclo::rational(q.clone()))
    }
}

/// Monomial test used by callers that need `p = c·x^m`.
pub fn as_monomial(p: &Poly<Cyclo>) -> Option<(Vec<u32>, Cyclo)> {
    if p.num_terms() == 1 {
        let (m, c) = p.terms().next().unwrap();
        Some((m.clone(), c.clone()))
    } else {
        None
    }
}

/// `true` when `a` divides `b` as monomials.
pub fn mono_divides(a: &[u32], b: &[u32]) -> bool {
    mono_div(b, a).is_some()
}
