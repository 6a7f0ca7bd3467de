use std::path::PathBuf;

use thiserror::Error;

/// Crate-wide error type. `Config` and `Usage` map to exit code 1 in the CLI,
/// everything else to 2.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{0}")]
    Usage(String),

    #[error("parse error in {path} at line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("infeasible solution: empty miner selection")]
    InfeasibleSolution,

    #[error("degenerate instance: {0}")]
    DegenerateInstance(String),

    #[error("invalid sample: {0}")]
    InvalidSample(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// CLI exit code for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Usage(_) => 1,
            _ => 2,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
