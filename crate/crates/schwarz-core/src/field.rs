// SPDX-License-Identifier: MIT OR Apache-2.0
//! The minimal field interface shared by every coefficient domain.
//!
//! Polynomials, matrices and Gröbner bases are written once against
//! [`Field`] and instantiated with cyclotomic scalars, reduced rational
//! functions or elements of a radical tower.

use core::fmt::Debug;
use num_rational::BigRational;

/// Exact field arithmetic by reference.
///
/// Every value must have a unique representation, so that `==` is
/// mathematical equality.
pub trait Field: Clone + PartialEq + Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse; `None` exactly for zero.
    fn inv(&self) -> Option<Self>;
    fn from_rational(q: &BigRational) -> Self;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn from_int(n: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(n.into()))
    }

    /// Quotient `self / other`; `None` when `other` is zero.
    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.mul(&i))
    }

    fn pow(&self, e: u32) -> Self {
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
}
