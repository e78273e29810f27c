use std::io;

use thiserror::Error;
use unitcov_core::Error as CoreError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("resource cap: {0}")]
    Cap(String),
    #[error("io error on {path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("self-check failed: {0}")]
    SelfCheck(String),
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }

    pub fn io(path: impl Into<String>, source: io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Io { .. } => 2,
            CliError::Cap(_) => 5,
            CliError::SelfCheck(_) => 1,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::CapExceeded { .. } => CliError::Cap(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
