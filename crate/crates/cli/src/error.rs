use thiserror::Error;

use euclidres::planner::ConfigError;
use euclidres::Error as CoreError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("species config: {0}")]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("verification failed: {0}")]
    Verify(String),
}

impl CliError {
    /// 0 success, 1 verification failure, 2 validation, 3 no convergence,
    /// 4 outside the validity window.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) => match e {
                CoreError::InvalidInput { .. }
                | CoreError::FieldRatioTooLarge { .. }
                | CoreError::InsufficientSamples { .. } => 2,
                CoreError::NoConvergence { .. } | CoreError::FixedPoint { .. } => 3,
                CoreError::NoSaddle { .. } | CoreError::NoResonance { .. } | CoreError::OutOfValidity { .. } => 4,
            },
            CliError::Config(ConfigError::Invalid(e)) => CliError::Core(e.clone()).exit_code(),
            CliError::Config(_) | CliError::Usage(_) | CliError::Io { .. } => 2,
            CliError::Verify(_) => 1,
        }
    }
}
