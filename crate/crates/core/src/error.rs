use thiserror::Error;

/// Errors reported by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("duplicate generator index {0} in monomial")]
    DuplicateIndex(String),
    #[error("unknown label {0}")]
    UnknownLabel(String),
    #[error("undefined bracket: {0}")]
    UndefinedBracket(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
