use std::fmt;

use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The degree hypothesis of the container theorem fails for the given `K`.
    #[error("container hypothesis fails for K = {given}; smallest admissible K is {min_k}")]
    Hypothesis { given: String, min_k: String },

    #[error("refusing {what}: {detail}")]
    ScaleRefusal { what: String, detail: String },

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl fmt::Display) -> Self {
        Error::InvalidArgument(msg.to_string())
    }

    pub(crate) fn precondition(msg: impl fmt::Display) -> Self {
        Error::Precondition(msg.to_string())
    }

    pub(crate) fn parse(line: usize, msg: impl fmt::Display) -> Self {
        Error::Parse {
            line,
            msg: msg.to_string(),
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidArgument(_) | Error::Parse { .. } => 2,
            Error::Precondition(_) | Error::Hypothesis { .. } => 3,
            Error::ScaleRefusal { .. } => 4,
            Error::Numeric(_) => 5,
            Error::Io(_) => 1,
        }
    }
}
