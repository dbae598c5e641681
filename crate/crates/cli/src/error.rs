use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error(transparent)]
    Core(#[from] sle_lab::Error),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("{failed} of {total} checks failed")]
    CheckFailed { failed: usize, total: usize },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 0 success, 1 validation, 2 numerical failure, 3 failed checks.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_numerical() => 2,
            CliError::Numerical(_) => 2,
            CliError::CheckFailed { .. } => 3,
            _ => 1,
        }
    }
}
