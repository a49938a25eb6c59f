use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },

    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    /// 0 success, 1 verification failure, 2 invalid input, 3 internal error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Invalid(_) => 2,
            CliError::Io { .. } | CliError::Internal(_) => 3,
        }
    }
}

impl From<toda_core::Error> for CliError {
    fn from(e: toda_core::Error) -> Self {
        if e.is_internal() {
            CliError::Internal(e.to_string())
        } else {
            CliError::Invalid(e.to_string())
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Internal(format!("serialization: {e}"))
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
