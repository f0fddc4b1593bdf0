use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("infeasible budget: {0}")]
    Infeasible(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("validation failed: {0}")]
    Validation(String),

    #[error(transparent)]
    Model(divcomb::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Model(_) => 1,
            CliError::Infeasible(_) => 2,
            CliError::Io { .. } => 3,
            CliError::Validation(_) => 4,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

impl From<divcomb::Error> for CliError {
    fn from(e: divcomb::Error) -> Self {
        match e {
            divcomb::Error::Domain(msg) => CliError::Usage(msg),
            divcomb::Error::Infeasible(msg) => CliError::Infeasible(msg),
            other => CliError::Model(other),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
