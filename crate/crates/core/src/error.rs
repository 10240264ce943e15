use thiserror::Error;

/// Errors raised anywhere in the library.
///
/// The variants line up with the CLI exit-code contract: parameter problems
/// map to 2, unsupported requests to 3.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("unsupported order: {0}")]
    UnsupportedOrder(String),
    #[error("unsupported request: {0}")]
    Unsupported(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("internal consistency check failed: {0}")]
    Consistency(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("I/O error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
