use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub const EXIT_RUNTIME: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] qtd_core::Error),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    /// Bad input is a usage error; everything that went wrong while
    /// computing or writing is a runtime failure.
    pub fn exit_code(&self) -> u8 {
        use qtd_core::Error as E;
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Core(
                E::Domain(_)
                | E::UnitMismatch { .. }
                | E::MismatchedWidths { .. }
                | E::Config(_)
                | E::UnknownScenario { .. },
            ) => EXIT_USAGE,
            CliError::Core(_) | CliError::Io { .. } | CliError::Failed(_) => EXIT_RUNTIME,
        }
    }
}
