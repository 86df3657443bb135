use thiserror::Error;

use crate::hilbert::BasisState;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("state {0} is not a member of this space")]
    NotAMember(BasisState),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("space cannot hold the requested state: {0}")]
    Capacity(String),

    #[error("dark mode undefined: both couplings are zero")]
    UndefinedMode,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("integration failed at t = {t:.6e} (step {step:.3e}): {reason}")]
    Integration { t: f64, step: f64, reason: String },

    #[error("invalid config field `{field}`: {message}")]
    Config { field: String, message: String },
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config { field: field.into(), message: message.into() }
    }
}
