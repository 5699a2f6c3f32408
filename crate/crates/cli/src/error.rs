use thiserror::Error;

/// Failures of a CLI run, each mapped to an exit status.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("instance is inadmissible: {0}")]
    Inadmissible(String),
    #[error(transparent)]
    Core(#[from] ferroflow::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 3,
            CliError::Core(ferroflow::Error::Capacity { .. }) => 3,
            CliError::Core(ferroflow::Error::Configuration(_)) => 3,
            CliError::Inadmissible(_) => 2,
            CliError::Core(_) | CliError::Io(_) => 1,
        }
    }
}
