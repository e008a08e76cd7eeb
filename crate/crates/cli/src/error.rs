use std::path::PathBuf;

use borncount_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    /// 1 for I/O, 2 for bad configuration, 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => 1,
            CliError::Config(_) => 2,
            CliError::Core(e) => match e {
                CoreError::Io(_) => 1,
                CoreError::Json(_)
                | CoreError::InvalidScenario(_)
                | CoreError::InvalidGrid(_)
                | CoreError::InvalidPartition(_)
                | CoreError::UnknownMap(_)
                | CoreError::UnknownLabel(_)
                | CoreError::NotOneDimensional(_) => 2,
                _ => 3,
            },
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
