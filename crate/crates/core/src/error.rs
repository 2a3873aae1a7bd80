use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}:{line}:{column}: syntax error: {message}")]
    Syntax { path: String, line: usize, column: usize, message: String },

    #[error("{path}: encoding error: {message}")]
    Encoding { path: String, message: String },

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("reference token stream is empty")]
    EmptyReference,

    #[error("{0}")]
    Data(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub fn data(msg: impl Into<String>) -> Self {
        Error::Data(msg.into())
    }

    /// Process exit code used by the command-line tool: 2 for bad data, 3 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } => 3,
            Error::Config(_) => 1,
            _ => 2,
        }
    }
}
