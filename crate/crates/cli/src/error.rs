use std::path::PathBuf;

use promise_color::Error;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("usage: {0}")]
    Usage(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

pub const EXIT_OTHER: u8 = 1;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_SOLVER: u8 = 3;
pub const EXIT_BUDGET: u8 = 4;
pub const EXIT_USAGE: u8 = 64;

impl CliError {
    /// Stable exit status per error class.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io { .. } => EXIT_OTHER,
            CliError::Core(e) => match e {
                Error::Parse(_)
                | Error::Format { .. }
                | Error::InvalidGraph(_)
                | Error::InvalidOperator(_)
                | Error::InvalidLabelCover(_)
                | Error::EmptyEdgeSet
                | Error::DimensionMismatch { .. }
                | Error::Json(_) => EXIT_PARSE,
                Error::NonConvergence { .. }
                | Error::Quadrature { .. }
                | Error::DerandShortfall { .. }
                | Error::FtViolation { .. } => EXIT_SOLVER,
                Error::BudgetExceeded(_) | Error::DerandParameter { .. } => EXIT_BUDGET,
                Error::InvalidParameter(_) => EXIT_USAGE,
                _ => EXIT_OTHER,
            },
        }
    }
}
