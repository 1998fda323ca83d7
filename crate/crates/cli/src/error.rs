use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("verification failed: {0}")]
    Verify(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    /// 1 for a failed verification, 2 for bad input, 3 for anything that
    /// points at a bug.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Verify(_) => 1,
            CliError::Input(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

impl From<multicake::Error> for CliError {
    fn from(err: multicake::Error) -> Self {
        match err {
            multicake::Error::Input(msg) => CliError::Input(msg),
            other => CliError::Internal(other.to_string()),
        }
    }
}
