use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Problem file that does not parse or describes an invalid problem.
    #[error("{}:{line}:{column}: {message}", path.display())]
    Spec {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Csv { path: PathBuf, source: csv::Error },
    #[error("{0}")]
    Plot(String),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("no admissible form")]
    NoAdmissibleForm,
    #[error(transparent)]
    Solver(#[from] t2fde::Error),
    #[error("{0} properties failed")]
    CheckFailed(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::NoAdmissibleForm => 2,
            CliError::Solver(t2fde::Error::IntegrationFailure { .. }) => 3,
            CliError::CheckFailed(_) => 4,
            _ => 1,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> Self {
        let path = path.into();
        move |source| CliError::Io { path, source }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
