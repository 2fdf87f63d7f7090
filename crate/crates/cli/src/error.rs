use std::path::Path;

/// Failure of a subcommand, classified by exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Diverged(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    NoConvergence(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => 2,
            Self::Diverged(_) => 3,
            Self::Io(_) => 4,
            Self::NoConvergence(_) => 5,
        }
    }

    pub fn io(path: &Path, err: std::io::Error) -> Self {
        Self::Io(format!("{}: {err}", path.display()))
    }
}

impl From<kdvsat::Error> for CliError {
    fn from(err: kdvsat::Error) -> Self {
        match err {
            kdvsat::Error::NonFiniteState { .. } => Self::Diverged(err.to_string()),
            kdvsat::Error::NoConvergence { .. } => Self::NoConvergence(err.to_string()),
            _ => Self::Usage(err.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
