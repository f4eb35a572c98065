//! Error type shared across the crate.

use alloc::string::String;
use core::fmt;

/// Errors produced by dataset handling, model fitting, generation, and
/// evaluation.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A parameter or precondition violation (bad counts, fractions outside
    /// (0,1), unnormalized input where normalized is required, ...).
    InvalidParam(String),
    /// Vector/matrix dimension does not match the model dimension.
    DimMismatch { expected: usize, got: usize },
    /// Too few rows/points for the requested operation.
    InsufficientData(String),
    /// A feature column contains no observed values, so no median exists.
    AllMissing { feature: String },
    /// A class has too few members to split or oversample.
    SmallClass { label: u8, count: usize },
    /// The bandwidth matrix is not positive definite even after
    /// regularization.
    NotPositiveDefinite,
    /// The KDE-KNN rejection loop exhausted its draw budget before reaching
    /// the per-class targets. Carries per-class bookkeeping so callers can
    /// report acceptance rates.
    GenerationStalled {
        accepted: [usize; 2],
        attempted: [usize; 2],
    },
    /// Labels contain a single class, so the operation is undefined.
    SingleClass,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParam(msg) => write!(f, "invalid parameter: {msg}"),
            Error::DimMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::InsufficientData(msg) => write!(f, "insufficient data: {msg}"),
            Error::AllMissing { feature } => {
                write!(f, "feature '{feature}' has no observed values to impute from")
            }
            Error::SmallClass { label, count } => {
                write!(f, "class {label} has only {count} member(s)")
            }
            Error::NotPositiveDefinite => write!(
                f,
                "bandwidth matrix is not positive definite; increase the regularization"
            ),
            Error::GenerationStalled {
                accepted,
                attempted,
            } => write!(
                f,
                "generation stalled before reaching targets: class 0 accepted {}/{} ({:.4}), \
                 class 1 accepted {}/{} ({:.4})",
                accepted[0],
                attempted[0],
                rate(accepted[0], attempted[0]),
                accepted[1],
                attempted[1],
                rate(accepted[1], attempted[1]),
            ),
            Error::SingleClass => write!(f, "labels contain a single class"),
        }
    }
}

impl core::error::Error for Error {}

fn rate(accepted: usize, attempted: usize) -> f64 {
    if attempted == 0 {
        0.0
    } else {
        accepted as f64 / attempted as f64
    }
}
