// SPDX-License-Identifier: MIT OR Apache-2.0
//! Exact symbolic machinery connecting algebraic linear ODEs with
//! invariant dynamical systems of finite matrix groups.
//!
//! The crate is `no_std` and only needs `alloc`. All values are immutable
//! once built and every operation is a pure function.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod cyclo;
pub mod error;
pub mod expr;
pub mod field;
pub mod groebner;
pub mod group;
pub mod invariants;
pub mod linalg;
pub mod numeric;
pub mod ode;
pub mod pipeline;
pub mod poly;
pub mod radical;
pub mod ratexpr;
pub mod ratfn;

pub use cyclo::Cyclo;
pub use error::{Error, Result};
pub use field::Field;
pub use poly::Poly;
pub use radical::{RadicalElem, Tower};
pub use ratexpr::RatExpr;
pub use ratfn::RatFn;
