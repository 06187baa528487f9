// SPDX-License-Identifier: MIT OR Apache-2.0
//! Quotients of multivariate polynomials that are not kept in lowest terms.
//!
//! Equality is decided by cross-multiplication. Only cheap normalizations
//! are applied eagerly (common monomial factor, monic denominator); a full
//! GCD pass runs when a numerator or denominator grows beyond
//! [`GCD_THRESHOLD`] terms, or on request through [`RatExpr::reduced`].

use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::{mono_div, Poly};
use crate::ratfn::{gcd, RatFn};

/// Term count above which a GCD reduction is attempted automatically.
pub const GCD_THRESHOLD: usize = 5000;

/// `num / den` with `den ≠ 0`.
#[derive(Clone, Debug)]
pub struct RatExpr {
    num: Poly<Cyclo>,
    den: Poly<Cyclo>,
}

impl PartialEq for RatExpr {
    fn eq(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl RatExpr {
    pub fn new(num: Poly<Cyclo>, den: Poly<Cyclo>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalize(num, den))
    }

    pub fn from_poly(p: Poly<Cyclo>) -> Self {
        RatExpr {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn from_ratfn(r: &RatFn) -> Self {
        RatExpr {
            num: r.num().clone(),
            den: r.den().clone(),
        }
    }

    pub fn num(&self) -> &Poly<Cyclo> {
        &self.num
    }

    pub fn den(&self) -> &Poly<Cyclo> {
        &self.den
    }

    fn normalize(num: Poly<Cyclo>, den: Poly<Cyclo>) -> Self {
        if num.is_zero() {
            return RatExpr {
                num,
                den: Poly::one(),
            };
        }
        let mut num = num;
        let mut den = den;
        let mn = num.monomial_content();
        let md = den.monomial_content();
        let common: alloc::vec::Vec<u32> = mn.iter().zip(md.iter()).map(|(a, b)| *a.min(b)).collect();
        if common.iter().any(|e| *e > 0) {
            num = divide_monomial(&num, &common);
            den = divide_monomial(&den, &common);
        }
        if num.num_terms() + den.num_terms() > GCD_THRESHOLD {
            let g = gcd(&num, &den);
            if !g.is_one() {
                num = num.div_exact(&g).unwrap();
                den = den.div_exact(&g).unwrap();
            }
        }
        let lc = den.lex_leading().unwrap().1.clone();
        if !lc.is_one() {
            let s = lc.inv().unwrap();
            num = num.scale(&s);
            den = den.scale(&s);
        }
        RatExpr { num, den }
    }

    /// Lowest-terms form via multivariate GCD.
    pub fn reduced(&self) -> Self {
        let g = gcd(&self.num, &self.den);
        if g.is_one() {
            return self.clone();
        }
        Self::normalize(
            self.num.div_exact(&g).unwrap(),
            self.den.div_exact(&g).unwrap(),
        )
    }

    /// Partial derivative.
    pub fn diff(&self, var: usize) -> Self {
        let dn = self.num.diff(var);
        let dd = self.den.diff(var);
        if dd.is_zero() {
            return Self::normalize(dn, self.den.clone());
        }
        Self::normalize(
            dn.mul(&self.den).sub(&self.num.mul(&dd)),
            self.den.mul(&self.den),
        )
    }

    /// Substitutes polynomials for variables in numerator and denominator.
    pub fn compose(&self, vals: &[Poly<Cyclo>]) -> Result<Self> {
        Self::new(self.num.compose(vals), self.den.compose(vals))
    }

    /// Largest total degree of numerator or denominator.
    pub fn degree(&self) -> u32 {
        self.num.total_degree().max(self.den.total_degree())
    }
}

fn divide_monomial(p: &Poly<Cyclo>, m: &[u32]) -> Poly<Cyclo> {
    Poly::from_terms(p.terms().map(|(k, c)| (mono_div(k, m).unwrap(), c.clone())))
}

impl Field for RatExpr {
    fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }
    fn one() -> Self {
        Self::from_poly(Poly::one())
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
            return Self::normalize(self.num.add(&other.num), self.den.clone());
        }
        if other.den.is_one() {
            return Self::normalize(self.num.add(&other.num.mul(&self.den)), self.den.clone());
        }
        if self.den.is_one() {
            return other.add(self);
        }
        Self::normalize(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }
    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        Self::normalize(self.num.mul(&other.num), self.den.mul(&other.den))
    }
    fn neg(&self) -> Self {
        RatExpr {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Self::normalize(self.den.clone(), self.num.clone()))
        }
    }
    fn from_rational(q: &num_rational::BigRational) -> Self {
        Self::from_poly(Poly::constant(Cyclo::rational(q.clone())))
    }
}
