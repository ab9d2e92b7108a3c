use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// Exact arithmetic could not decide a geometric predicate.
    #[error("precision: {0}")]
    Precision(String),
    #[error("vertex {0} has no outgoing weight")]
    NoTransition(usize),
    #[error("step budget of {0} exceeded")]
    Timeout(u64),
    #[error("out of range: {0}")]
    Range(String),
    #[error("singular system: {0}")]
    Singular(String),
    #[error("domain error: {0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code used by the command line drivers.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Timeout(_) => 3,
            _ => 2,
        }
    }
}
