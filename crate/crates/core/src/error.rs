//! Error type shared across the crate.

use thiserror::Error;

/// Everything that can go wrong while building or checking a certificate.
#[derive(Debug, Error)]
pub enum Error {
    /// An instance fails a structural precondition (bad `n`, `t >= 0`, ...).
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    /// The pipeline ran but the hypotheses of the measure are not met
    /// (e.g. `E <= 1`, or the `Z/U` ratio falls outside the admissible set).
    #[error("measure not applicable: {0}")]
    NotApplicable(String),

    /// A degenerate algebraic situation (zero coefficients, `x` equal to a
    /// root of the resolvent, ...).
    #[error("degenerate instance: {0}")]
    Degenerate(String),

    /// A `(C, D)` validation failure for the hypergeometric constants.
    #[error("constant validation failed: {0}")]
    CdValidation(String),

    /// Interval arithmetic could not separate two quantities even at the
    /// maximum allowed precision.
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    /// A requested refinement target cannot be certified.
    #[error("refinement failed: {0}")]
    RefinementFailed(String),

    /// Continued-fraction cache file is malformed or inconsistent.
    #[error("cf cache: {0}")]
    Cache(String),

    /// Configuration file / environment problems.
    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInstance(msg.into())
    }
    pub fn not_applicable(msg: impl Into<String>) -> Self {
        Error::NotApplicable(msg.into())
    }
    pub fn degenerate(msg: impl Into<String>) -> Self {
        Error::Degenerate(msg.into())
    }
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
