//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Input data violates a type invariant (non-unit direction, negative
    /// volume, dimension mismatch, ...).
    #[error("validation error: {0}")]
    Validation(String),

    /// A parameter is outside the admissible range of an operation.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// The rank-one direction coincides with the half-space normal where a
    /// non-degenerate direction is required.
    #[error("degenerate direction: {0}")]
    DegenerateDirection(String),

    /// A volume lies on the wrong side of the regime threshold for the
    /// requested construction.
    #[error("regime error: {0}")]
    Regime(String),

    /// The requested method/shape combination is not supported.
    #[error("capability error: {0}")]
    Capability(String),

    /// A grid is too coarse to resolve the smallest feature of a shape.
    #[error("resolution error: {0}")]
    Resolution(String),

    /// Not enough (or degenerate) data for a least-squares fit.
    #[error("fit error: {0}")]
    Fit(String),

    /// An internal consistency check failed; this indicates a bug, not bad
    /// input.
    #[error("internal consistency error: {0}")]
    Internal(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub fn parameter(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }
}
