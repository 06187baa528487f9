// SPDX-License-Identifier: MIT OR Apache-2.0
//! Error type shared by all algebraic operations.

use alloc::string::String;
use core::fmt;

/// Failure of an exact or numerical operation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// A variable index or name outside the declared variable list.
    UnknownVariable(String),
    /// A polynomial expected to be homogeneous is not.
    Inhomogeneous,
    /// Division by an exact zero.
    DivisionByZero,
    /// A linear system with nonzero determinant was expected.
    SingularMatrix,
    /// A kernel of dimension one was expected.
    KernelNotUnique,
    /// Matrix or vector shapes do not fit together.
    DimensionMismatch,
    /// The configured total-degree safety bound was exceeded.
    DegreeBound { degree: u32, bound: u32 },
    /// Closure produced more elements than the configured bound.
    GroupOrderBound(usize),
    /// A generator matrix is not invertible.
    NonInvertibleGenerator,
    /// An invariant could not be written in the declared generators.
    RewriteFailed(String),
    /// Two radical towers that cannot be merged were combined.
    TowerMismatch,
    /// A radical expression is outside the supported flat form.
    UnsupportedRadical(String),
    /// Generic invalid input with an explanation.
    Invalid(String),
    /// Numerical procedure failure (non-convergence, singularity, ...).
    Numeric(String),
    /// Malformed expression text, with a 1-based position.
    Syntax { line: usize, column: usize, message: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::UnknownVariable(v) => write!(f, "unknown variable `{v}`"),
            Error::Inhomogeneous => f.write_str("polynomial is not homogeneous"),
            Error::DivisionByZero => f.write_str("division by zero"),
            Error::SingularMatrix => f.write_str("matrix singular over function field"),
            Error::KernelNotUnique => f.write_str("dependence relation not unique"),
            Error::DimensionMismatch => f.write_str("dimension mismatch"),
            Error::DegreeBound { degree, bound } => {
                write!(f, "degree bound exceeded: degree {degree} > bound {bound}")
            }
            Error::GroupOrderBound(b) => write!(f, "group order bound {b} exceeded"),
            Error::NonInvertibleGenerator => f.write_str("non-invertible generator"),
            Error::RewriteFailed(s) => write!(f, "not in generated subring of this degree: {s}"),
            Error::TowerMismatch => f.write_str("incompatible radical towers"),
            Error::UnsupportedRadical(s) => write!(f, "unsupported radical: {s}"),
            Error::Invalid(s) => f.write_str(s),
            Error::Numeric(s) => write!(f, "numeric failure: {s}"),
            Error::Syntax { line, column, message } => {
                write!(f, "syntax error at line {line}, column {column}: {message}")
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
