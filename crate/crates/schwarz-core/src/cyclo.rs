// SPDX-License-Identifier: MIT OR Apache-2.0
//! Exact arithmetic in cyclotomic number fields `Q(ζ_N)`.
//!
//! An element is stored in the power basis `1, ζ, …, ζ^{φ(N)-1}` as the
//! unique residue modulo the `N`-th cyclotomic polynomial. Rational values
//! are always stored with conductor 1, so a value that happens to be
//! rational compares equal to the plain rational regardless of the field it
//! was computed in.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::field::Field;

/// Element of `Q(ζ_N)`.
#[derive(Clone, Debug)]
pub struct Cyclo {
    n: u32,
    c: Vec<BigRational>,
}

/// Coefficients (ascending) of the `n`-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    assert!(n >= 1, "conductor must be positive");
    // x^n - 1 divided by every Φ_d with d a proper divisor of n.
    let mut p = vec![0i64; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            p = div_monic_i64(&p, &cyclotomic_polynomial(d));
        }
    }
    p
}

fn div_monic_i64(a: &[i64], b: &[i64]) -> Vec<i64> {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    let mut q = vec![0i64; a.len() - db];
    for k in (0..q.len()).rev() {
        let coef = r[k + db];
        q[k] = coef;
        if coef != 0 {
            for (j, bj) in b.iter().enumerate() {
                r[k + j] -= coef * bj;
            }
        }
    }
    debug_assert!(r.iter().all(|x| *x == 0));
    q
}

/// Euler's totient.
pub fn euler_phi(n: u32) -> u32 {
    (1..=n).filter(|k| num_integer::gcd(*k, n) == 1).count() as u32
}

fn lcm(a: u32, b: u32) -> u32 {
    a / num_integer::gcd(a, b) * b
}

impl Cyclo {
    /// The rational number `q` (conductor 1).
    pub fn rational(q: BigRational) -> Self {
        Cyclo { n: 1, c: vec![q] }
    }

    pub fn int(v: i64) -> Self {
        Self::rational(BigRational::from_integer(BigInt::from(v)))
    }

    /// `ζ_N^k` for a primitive `N`-th root of unity `ζ_N = exp(2πi/N)`.
    pub fn zeta_pow(n: u32, k: i64) -> Self {
        assert!(n >= 1, "conductor must be positive");
        let e = k.rem_euclid(n as i64) as usize;
        let mut raw = vec![BigRational::zero(); e + 1];
        raw[e] = BigRational::one();
        Self::from_raw(n, raw)
    }

    /// Reduces an arbitrary polynomial in `ζ_N` to canonical form.
    pub fn from_raw(n: u32, mut raw: Vec<BigRational>) -> Self {
        let phi = cyclotomic_polynomial(n);
        let d = phi.len() - 1;
        for k in (d..raw.len()).rev() {
            let coef = core::mem::take(&mut raw[k]);
            if !coef.is_zero() {
                for (j, pj) in phi.iter().enumerate().take(d) {
                    if *pj != 0 {
                        raw[k - d + j] -= &coef * BigRational::from_integer(BigInt::from(*pj));
                    }
                }
            }
        }
        raw.truncate(d.max(1));
        raw.resize(d.max(1), BigRational::zero());
        Self::normalize(n, raw)
    }

    fn normalize(n: u32, c: Vec<BigRational>) -> Self {
        if n == 1 || c.iter().skip(1).all(|x| x.is_zero()) {
            let v = c.into_iter().next().unwrap_or_else(BigRational::zero);
            Cyclo { n: 1, c: vec![v] }
        } else {
            Cyclo { n, c }
        }
    }

    /// Conductor of the smallest configured field holding the value
    /// (1 for rationals).
    pub fn conductor(&self) -> u32 {
        self.n
    }

    /// Power-basis coefficients.
    pub fn coefficients(&self) -> &[BigRational] {
        &self.c
    }

    /// The value as a rational, if it is one.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.n == 1 {
            Some(&self.c[0])
        } else {
            None
        }
    }

    /// Re-expresses the value in `Q(ζ_m)` for a multiple `m` of the
    /// conductor, returning raw (unreduced) power-basis coefficients.
    fn embed_raw(&self, m: u32) -> Vec<BigRational> {
        let step = (m / self.n) as usize;
        let mut raw = vec![BigRational::zero(); step * (self.c.len() - 1) + 1];
        for (k, ck) in self.c.iter().enumerate() {
            raw[k * step] = ck.clone();
        }
        raw
    }

    fn common(a: &Self, b: &Self) -> (u32, Vec<BigRational>, Vec<BigRational>) {
        if a.n == b.n {
            return (a.n, a.c.clone(), b.c.clone());
        }
        let m = lcm(a.n, b.n);
        let ra = Self::from_raw(m, a.embed_raw(m)).padded(m);
        let rb = Self::from_raw(m, b.embed_raw(m)).padded(m);
        (m, ra, rb)
    }

    fn padded(&self, m: u32) -> Vec<BigRational> {
        if self.n == m {
            return self.c.clone();
        }
        let d = euler_phi(m) as usize;
        let mut v = self.embed_raw(m);
        v.resize(d.max(v.len()), BigRational::zero());
        v
    }

    /// Numerical value with `ζ_N = exp(2πi/N)`.
    pub fn to_complex(&self) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        let theta = 2.0 * core::f64::consts::PI / self.n as f64;
        for (k, ck) in self.c.iter().enumerate() {
            if ck.is_zero() {
                continue;
            }
            let v = ck.to_f64().unwrap_or(f64::NAN);
            acc += Complex64::from_polar(v, theta * k as f64);
        }
        acc
    }

    /// Complex conjugate (the automorphism `ζ ↦ ζ^{-1}`).
    pub fn conj(&self) -> Self {
        let mut acc = Self::zero();
        for (k, ck) in self.c.iter().enumerate() {
            if !ck.is_zero() {
                let z = Self::zeta_pow(self.n, -(k as i64));
                acc = acc.add(&z.mul(&Self::rational(ck.clone())));
            }
        }
        acc
    }
}

impl PartialEq for Cyclo {
    fn eq(&self, other: &Self) -> bool {
        if self.n == other.n {
            return self.c == other.c;
        }
        if self.n == 1 || other.n == 1 {
            return false;
        }
        let (_, a, b) = Self::common(self, other);
        a == b
    }
}

impl Eq for Cyclo {}

/// Dense univariate helpers over Q used for inversion.
fn trim(p: &mut Vec<BigRational>) {
    while p.len() > 1 && p.last().is_some_and(|x| x.is_zero()) {
        p.pop();
    }
}

fn divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let mut bb = b.to_vec();
    trim(&mut bb);
    let db = bb.len() - 1;
    let lead = bb[db].clone();
    if r.len() <= db {
        return (vec![BigRational::zero()], r);
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    for k in (0..q.len()).rev() {
        let coef = &r[k + db] / &lead;
        if !coef.is_zero() {
            for (j, bj) in bb.iter().enumerate() {
                r[k + j] -= &coef * bj;
            }
        }
        q[k] = coef;
    }
    r.truncate(db.max(1));
    trim(&mut r);
    (q, r)
}

fn mul_dense(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

fn sub_dense(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut out = vec![BigRational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[i] -= x;
    }
    trim(&mut out);
    out
}

impl Field for Cyclo {
    fn zero() -> Self {
        Self::int(0)
    }
    fn one() -> Self {
        Self::int(1)
    }
    fn is_zero(&self) -> bool {
        self.n == 1 && self.c[0].is_zero()
    }
    fn is_one(&self) -> bool {
        self.n == 1 && self.c[0].is_one()
    }
    fn add(&self, other: &Self) -> Self {
        if self.n == 1 && other.n == 1 {
            return Self::rational(&self.c[0] + &other.c[0]);
        }
        if other.n == 1 {
            let mut c = self.c.clone();
            c[0] += &other.c[0];
            return Self::normalize(self.n, c);
        }
        if self.n == 1 {
            return other.add(self);
        }
        let (m, a, b) = Self::common(self, other);
        let c = a.iter().zip(b.iter()).map(|(x, y)| x + y).collect();
        Self::normalize(m, c)
    }
    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    fn mul(&self, other: &Self) -> Self {
        if self.n == 1 && other.n == 1 {
            return Self::rational(&self.c[0] * &other.c[0]);
        }
        if other.n == 1 {
            let s = &other.c[0];
            return Self::normalize(self.n, self.c.iter().map(|x| x * s).collect());
        }
        if self.n == 1 {
            return other.mul(self);
        }
        let (m, a, b) = Self::common(self, other);
        Self::from_raw(m, mul_dense(&a, &b))
    }
    fn neg(&self) -> Self {
        Cyclo {
            n: self.n,
            c: self.c.iter().map(|x| -x).collect(),
        }
    }
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.n == 1 {
            return Some(Self::rational(self.c[0].recip()));
        }
        // Extended Euclid: s·a + t·Φ = 1, so a^{-1} = s mod Φ.
        let phi: Vec<BigRational> = cyclotomic_polynomial(self.n)
            .into_iter()
            .map(|v| BigRational::from_integer(BigInt::from(v)))
            .collect();
        let (mut r0, mut r1) = (phi, self.c.clone());
        trim(&mut r1);
        let (mut s0, mut s1) = (vec![BigRational::zero()], vec![BigRational::one()]);
        while !(r1.len() == 1 && r1[0].is_zero()) {
            let (q, r) = divrem(&r0, &r1);
            let s2 = sub_dense(&s0, &mul_dense(&q, &s1));
            r0 = core::mem::replace(&mut r1, r);
            s0 = core::mem::replace(&mut s1, s2);
        }
        // r0 is a nonzero constant since Φ_N is irreducible.
        let g = r0[0].clone();
        let s: Vec<BigRational> = s0.iter().map(|x| x / &g).collect();
        Some(Self::from_raw(self.n, s))
    }
    fn from_rational(q: &BigRational) -> Self {
        Self::rational(q.clone())
    }
}

impl fmt::Display for Cyclo {
    /// Prints in the expression language, using `w` for `ζ_N`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n == 1 {
            return write_rational(f, &self.c[0]);
        }
        let mut first = true;
        f.write_str("(")?;
        for (k, ck) in self.c.iter().enumerate() {
            if ck.is_zero() {
                continue;
            }
            let neg = ck.is_negative();
            let abs = ck.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { "-" } else { "+" })?;
            }
            first = false;
            match k {
                0 => write_rational(f, &abs)?,
                _ => {
                    if !abs.is_one() {
                        write_rational(f, &abs)?;
                        f.write_str("*")?;
                    }
                    if k == 1 {
                        f.write_str("w")?;
                    } else {
                        write!(f, "w^{}", k)?;
                    }
                }
            }
        }
        f.write_str(")")
    }
}

/// Writes `p/q` (or `p`) with no surrounding parentheses.
pub(crate) fn write_rational(f: &mut fmt::Formatter<'_>, q: &BigRational) -> fmt::Result {
    if q.denom().is_one() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}
