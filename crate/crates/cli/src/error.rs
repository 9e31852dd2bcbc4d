use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum StateError {
    #[error("cannot read state file {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("cannot parse state file: {0}")]
    Parse(String),
    #[error("invalid state: {0}")]
    InvariantViolation(String),
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    State(#[from] StateError),
    #[error("numerical failure: {0}")]
    Numerical(#[from] backflow_core::Error),
    #[error("output error: {0}")]
    Output(String),
    #[error("{failed} validation group(s) failed")]
    Validation { failed: usize },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation { .. } => 1,
            CliError::Config(_) | CliError::State(_) | CliError::Output(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Output(e.to_string())
    }
}
