use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] chocolate_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    /// 1 for failed checks and i/o, 2 for bad input, 3 for capacity limits.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(chocolate_core::Error::Capacity { .. }) => 3,
            CliError::Core(_) | CliError::Usage(_) => 2,
            CliError::Verification(_) | CliError::Io(_) => 1,
        }
    }
}
