use thiserror::Error;

/// Errors produced by the polynomial-matrix engines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// The caller asked for fewer GCRD rows than the normal rank allows.
    #[error("invalid request: {reason} (normal rank is {rank})")]
    InvalidRequest { rank: usize, reason: String },

    #[error("degenerate degree: {0}")]
    DegenerateDegree(String),

    #[error("matrix is not right divisible by the given divisor")]
    NotDivisible,

    /// A post-condition of an internal step failed, usually because the rank
    /// tolerance is badly chosen for the input.
    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),

    #[error("numerical kernel failed: {0}")]
    Numerical(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
