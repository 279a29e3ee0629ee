//! Error types shared across the crate.

use num_complex::Complex64;
use thiserror::Error;

/// Errors produced by series arithmetic, measure handling and verification.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A division (or logarithm) hit a constant term below the guard epsilon.
    #[error("division by near-zero constant term: |c0| = {modulus:e} <= eps = {eps:e}")]
    DivisionBySmallConstant { modulus: f64, eps: f64 },

    /// Series composition requires the inner series to vanish at the origin.
    #[error("composition inner series has nonzero constant term {got}")]
    NonzeroInnerConstant { got: Complex64 },

    /// A measure failed validation (mass, atom angles or weights).
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    /// An argument was outside its documented domain.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// A series expected to be Caratheodory-normalized (constant term 1) was not.
    #[error("series is not Caratheodory-normalized: constant term is {got}")]
    NotCaratheodory { got: Complex64 },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
