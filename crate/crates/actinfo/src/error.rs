//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by statistic, distribution, and table operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument fell outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A structured input (prior table, probability vector, table spec)
    /// failed validation.
    #[error("invalid {what}: {why}")]
    Invalid { what: &'static str, why: String },

    /// Inputs that must agree in length or layout did not.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// The requested mode is not defined for the given configuration.
    #[error("unsupported mode: {0}")]
    UnsupportedMode(String),

    /// An iterative method exhausted its iteration budget.
    #[error("no convergence in {0}")]
    NoConvergence(&'static str),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn invalid(what: &'static str, why: impl Into<String>) -> Self {
        Error::Invalid {
            what,
            why: why.into(),
        }
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
