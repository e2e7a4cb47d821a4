use std::io;
use std::path::Path;

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_ANALYSIS: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad flags, unreadable or malformed inputs, missing model.
    #[error("{0}")]
    Usage(String),
    /// The analysis itself failed.
    #[error(transparent)]
    Analysis(#[from] stochastid_core::Error),
    #[error("{0}")]
    Output(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn read(path: &Path, err: io::Error) -> Self {
        CliError::Usage(format!("cannot read {}: {err}", path.display()))
    }

    pub fn write(path: &Path, err: io::Error) -> Self {
        CliError::Output(format!("cannot write {}: {err}", path.display()))
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Output(_) => EXIT_USAGE,
            CliError::Analysis(_) => EXIT_ANALYSIS,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
