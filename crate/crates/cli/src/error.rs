use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("output error: {0}")]
    Output(#[from] std::io::Error),
}

impl From<orfkit_core::Error> for CliError {
    fn from(e: orfkit_core::Error) -> Self {
        CliError::Numerical(e.to_string())
    }
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Verification(_) => ExitCode::from(1),
            CliError::Config(_) => ExitCode::from(2),
            CliError::Numerical(_) | CliError::Output(_) => ExitCode::from(3),
        }
    }
}
