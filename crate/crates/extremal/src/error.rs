use std::io;

use extremal_core::applications::ApplicationError;
use extremal_core::bounds::BoundsError;
use extremal_core::oracle::OracleError;
use extremal_core::EigenError;

use crate::matrix_io::MatrixIoError;

/// Everything a command can fail with, mapped onto process exit codes.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    MatrixIo(#[from] MatrixIoError),
}

impl CliError {
    /// 1 for verification and i/o failures, 2 for usage errors, 3 for
    /// numerical non-convergence.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::VerificationFailed(_) | CliError::Io(_) | CliError::Csv(_) | CliError::MatrixIo(_) => 1,
        }
    }
}

impl From<EigenError> for CliError {
    fn from(e: EigenError) -> Self {
        CliError::Numerical(e.to_string())
    }
}

impl From<BoundsError> for CliError {
    fn from(e: BoundsError) -> Self {
        match e {
            BoundsError::ZeroDimension => CliError::Usage(e.to_string()),
            e => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::Eigen(e) => e.into(),
            e => CliError::Usage(e.to_string()),
        }
    }
}

impl From<ApplicationError> for CliError {
    fn from(e: ApplicationError) -> Self {
        match e {
            ApplicationError::Eigen(e) => e.into(),
            ApplicationError::Bounds(e) => e.into(),
            e => CliError::Usage(e.to_string()),
        }
    }
}
