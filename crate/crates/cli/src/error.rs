use std::path::PathBuf;

use thiserror::Error;

/// Exit status for rejected arguments or inputs.
pub const EXIT_INVALID: i32 = 2;
/// Exit status for failures during a fit or while writing results.
pub const EXIT_RUNTIME: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    /// Rejected before any fit ran.
    #[error("{0}")]
    Invalid(spca_core::Error),

    #[error("{0}")]
    Runtime(spca_core::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Invalid(_) => EXIT_INVALID,
            CliError::Runtime(_) | CliError::Io { .. } | CliError::Format { .. } => EXIT_RUNTIME,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "UsageError",
            CliError::Invalid(e) | CliError::Runtime(e) => e.name(),
            CliError::Io { .. } => "IoError",
            CliError::Format { .. } => "FormatError",
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
