use std::process::ExitCode;

use laminar_core::bounds::CacheError;
use laminar_core::construct::ConstructError;
use laminar_core::format::FormatError;
use laminar_core::geometry::GeometryError;
use laminar_core::search::SearchError;
use thiserror::Error;

/// Exit status 1 (a checked property fails) is not an error; commands return
/// it directly.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Resource(String),
    #[error("{0}")]
    Corrupt(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Usage(_) => 2,
            CliError::Resource(_) | CliError::Io(_) => 3,
            CliError::Corrupt(_) => 4,
        })
    }
}

impl From<CacheError> for CliError {
    fn from(e: CacheError) -> Self {
        match e {
            CacheError::Io(e) => CliError::Io(e),
            other => CliError::Corrupt(other.to_string()),
        }
    }
}

impl From<GeometryError> for CliError {
    fn from(e: GeometryError) -> Self {
        match e {
            GeometryError::BlockCount { .. } => CliError::Corrupt(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<ConstructError> for CliError {
    fn from(e: ConstructError) -> Self {
        match e {
            ConstructError::TooLarge { .. } => CliError::Resource(e.to_string()),
            ConstructError::Geometry(g) => g.into(),
            ConstructError::CertificationFailed(_) => CliError::Corrupt(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<SearchError> for CliError {
    fn from(e: SearchError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        CliError::Usage(e.to_string())
    }
}
