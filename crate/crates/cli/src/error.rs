//! Error taxonomy of the command-line layer, mapped onto exit codes:
//! 0 success, 1 usage error, 2 runtime/numerical error.

use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError::Usage(message.into())
    }

    pub fn runtime(message: impl Into<String>) -> Self {
        CliError::Runtime(message.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Runtime(_) => 2,
        }
    }

    /// Wrap an I/O failure with the path it concerned.
    pub fn io(context: &Path, err: std::io::Error) -> Self {
        CliError::Runtime(format!("{}: {err}", context.display()))
    }
}

impl From<dtqw_core::Error> for CliError {
    fn from(err: dtqw_core::Error) -> Self {
        match err {
            // parameter-range problems are caller mistakes
            dtqw_core::Error::Domain { .. } => CliError::Usage(err.to_string()),
            _ => CliError::Runtime(err.to_string()),
        }
    }
}
