use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("invalid input in {path}: {message}")]
    Input { path: PathBuf, message: String },

    #[error("{}: {source}", source.tag())]
    Analysis {
        #[from]
        source: spikeinfo::Error,
    },

    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("failed to encode report: {0}")]
    Encode(#[from] serde_json::Error),
}

impl CliError {
    /// 2 for anything the caller can fix by changing arguments or inputs,
    /// 1 for failures of the environment.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Input { .. } | CliError::Analysis { .. } => 2,
            CliError::Io { .. } | CliError::Encode(_) => 1,
        }
    }

    pub fn input(path: &std::path::Path, message: impl Into<String>) -> Self {
        CliError::Input {
            path: path.to_path_buf(),
            message: message.into(),
        }
    }

    pub fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
