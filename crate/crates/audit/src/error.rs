use thiserror::Error;

#[derive(Debug, Error)]
pub enum AuditError {
    #[error(transparent)]
    Core(#[from] vdc_core::Error),
    #[error("config: {0}")]
    Config(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

pub type AuditResult<T> = std::result::Result<T, AuditError>;

/// Exit status for a failed run: 3 for exhausted work limits, 2 for bad
/// configuration, 1 for I/O.
impl AuditError {
    pub fn exit_code(&self) -> i32 {
        use vdc_core::Error as E;
        match self {
            AuditError::Core(
                E::BudgetExceeded { .. }
                | E::ChainBudgetExceeded { .. }
                | E::Infeasible { .. }
                | E::KernelTooLarge { .. },
            ) => 3,
            AuditError::Core(E::Io(_)) | AuditError::Io(_) | AuditError::Csv(_) => 1,
            _ => 2,
        }
    }
}
