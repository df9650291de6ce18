//! File formats, configuration and command implementations behind the
//! `hyperpure` binary.

pub mod config;
pub mod format;
pub mod record;
pub mod sweep;
pub mod verify;

use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("config error in `{field}`: {message}")]
    Config { field: String, message: String },
    #[error("config parse error: {0}")]
    Parse(String),
    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("simulation error: {0}")]
    Domain(#[from] hyperpure_core::Error),
    #[error("{0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Usage(_)
            | CliError::Config { .. }
            | CliError::Parse(_)
            | CliError::Io { .. } => 2,
            CliError::Domain(_) => 3,
        }
    }

    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Config {
            field: field.into(),
            message: message.into(),
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
