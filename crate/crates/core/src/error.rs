use thiserror::Error;

/// Errors raised by every fallible operation in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("p must exceed 1 (got {0})")]
    InvalidRank(f64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid support [{a}, {b}]: need a <= 0 <= b and a < b")]
    InvalidSupport { a: f64, b: f64 },

    #[error("invalid increment schedule: {0}")]
    InvalidSchedule(String),

    #[error("bisection failed: {0}")]
    RootFinding(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
