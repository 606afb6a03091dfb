use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config error: {0}")]
    Config(String),

    #[error("{}:{line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{}: {message}", path.display())]
    Format { path: PathBuf, message: String },

    #[error("{}: dataset has no samples", .0.display())]
    EmptyDataset(PathBuf),

    #[error("stale reference: {0}")]
    StaleReference(String),

    #[error(transparent)]
    Solver(#[from] freefista::Error),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, HarnessError>;

impl HarnessError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        HarnessError::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit status for this error: 2 for configuration problems,
    /// 4 for unreadable input files, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) | HarnessError::StaleReference(_) => 2,
            HarnessError::Solver(
                freefista::Error::InvalidParameter(_) | freefista::Error::InvalidConditioning { .. },
            ) => 2,
            HarnessError::Parse { .. } | HarnessError::Format { .. } | HarnessError::EmptyDataset(_) => 4,
            _ => 1,
        }
    }
}

/// Exit status of a run that stopped on its iteration budget.
pub const EXIT_BUDGET_EXHAUSTED: i32 = 3;
