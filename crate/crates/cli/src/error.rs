use std::path::PathBuf;

use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_NO_EFIMOV: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{0}")]
    NoEfimov(efimov_core::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("writing report: {0}")]
    Output(#[from] std::io::Error),

    #[error(transparent)]
    Solver(efimov_core::Error),

    #[error("{0}")]
    Convergence(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::NoEfimov(_) => EXIT_NO_EFIMOV,
            _ => EXIT_FAILURE,
        }
    }
}

impl From<efimov_core::Error> for CliError {
    fn from(e: efimov_core::Error) -> Self {
        match e {
            efimov_core::Error::NoEfimovRegime { .. } => CliError::NoEfimov(e),
            efimov_core::Error::InvalidParameter(msg) => CliError::Usage(msg),
            other => CliError::Solver(other),
        }
    }
}
