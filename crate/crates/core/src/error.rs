use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An optimizer or estimator failed to produce a usable result.
    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("optimizer did not converge after {iterations} iterations (last objective {objective})")]
    NoConvergence {
        iterations: usize,
        objective: f64,
        last: Vec<f64>,
    },

    #[error("parse error at row {row}: {msg}")]
    Parse { row: usize, msg: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }

    /// Process exit code for the CLI: 1 invalid input, 2 numerical failure, 3 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidInput(_) | Error::Parse { .. } => 1,
            Error::Numerical(_) | Error::NoConvergence { .. } => 2,
            Error::Io { .. } => 3,
        }
    }
}
