use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An element, space, or M-function failed validation.
    #[error("validation error: {0}")]
    Validation(String),

    /// A formula was applied outside the inputs it is defined for.
    #[error("domain error: {0}")]
    Domain(String),

    /// An exhaustive enumeration was asked to run above its size cap.
    #[error("size error: {size} exceeds the enumeration cap of {cap}")]
    Size { size: usize, cap: usize },

    #[error("boundary-weight condition violated: {0}")]
    Condition2(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown set name `{0}`")]
    UnknownSet(String),

    #[error("usage error: {0}")]
    Usage(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn validation(msg: impl Into<String>) -> Error {
    Error::Validation(msg.into())
}
