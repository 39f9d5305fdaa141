//! Error type shared by every module.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("linear system has no solution")]
    NoSolution,
    #[error("required cohomology vanishing does not hold: {0}")]
    PrereqVanishingFailed(String),
    #[error("could not decide within the search window: {0}")]
    Undecided(String),
    #[error("presentation is not minimal: {0}")]
    NotMinimalGamma(String),
    #[error("bundle has ACM line bundle summands: {0}")]
    HasAcmSummands(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),
    #[error("bound exceeded: {0}")]
    BoundExceeded(String),
    #[error("lift failed: {0}")]
    LiftFailed(String),
    #[error("sequence not exact at degree {degree}, position {i}")]
    ExactnessViolation { degree: i64, i: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid module data: {0}")]
    InvalidModule(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
