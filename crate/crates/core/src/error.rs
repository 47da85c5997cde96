use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Malformed or non-finite input data.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// Parameters outside the domain where an operation or constant is defined.
    #[error("domain violation: {0}")]
    Domain(String),
    /// A computed result contradicts a proven bound or an internal consistency check.
    #[error("numerical anomaly: {0}")]
    Anomaly(String),
}

/// Coarse error classification, stable across versions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    BadInput,
    Domain,
    Anomaly,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::InvalidInput(_) => ErrorClass::BadInput,
            Error::Domain(_) => ErrorClass::Domain,
            Error::Anomaly(_) => ErrorClass::Anomaly,
        }
    }

    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
