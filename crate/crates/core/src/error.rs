use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument violated an operation's precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The function is not defined (or not real-valued) at the requested point.
    #[error("domain error: {0}")]
    Domain(String),

    /// A series produced a NaN or infinite term.
    #[error("non-finite value at index {index}")]
    NonFinite { index: i64 },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed plan: {0}")]
    Parse(#[from] serde_json::Error),

    /// Plan schema violation, located by entry index and parameter name.
    #[error("plan entry {entry}, parameter `{param}`: {message}")]
    Validation {
        entry: usize,
        param: String,
        message: String,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
