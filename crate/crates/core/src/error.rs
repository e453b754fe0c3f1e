use thiserror::Error;

/// Errors reported by the library and mapped to CLI exit codes.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("not nilpotent: {0}")]
    NotNilpotent(String),
    #[error("maps {0} and {1} do not commute")]
    NotCommuting(usize, usize),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("not a valid gluing: {0}")]
    InvalidGluing(String),
    #[error("not a subbundle: {0}")]
    NotSubbundle(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

impl Error {
    /// `true` for errors caused by malformed input rather than failed preconditions.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Parse(_) | Error::DimensionMismatch { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
