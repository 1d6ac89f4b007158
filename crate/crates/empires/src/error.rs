use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("enumeration guard exceeded ({0} candidate assignments); pass an explicit cap")]
    GuardExceeded(u128),
    #[error("search budget exhausted: {0}")]
    Timeout(String),
    #[error("search found no feasible solution: {0}")]
    SearchFailed(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
