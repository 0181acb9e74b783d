use thiserror::Error;

use crate::domain::EntryId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("feature dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid feature vector: {0}")]
    InvalidFeatures(String),

    #[error("invalid task: {0}")]
    InvalidTask(String),

    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParam { field: &'static str, reason: String },

    #[error("entry {0} already present in the index")]
    DuplicateEntry(EntryId),

    #[error("entry {0} not present in the index")]
    UnknownEntry(EntryId),

    #[error("reuse table for service `{0}` is empty")]
    EmptyTable(String),

    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("config field `{field}`: {reason}")]
    Config { field: String, reason: String },

    #[error("reports come from different workloads: {0}")]
    WorkloadMismatch(String),

    #[error("unknown scenario `{name}` (valid: {valid})")]
    UnknownScenario { name: String, valid: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn param(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParam {
            field,
            reason: reason.into(),
        }
    }

    pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }

    /// True for errors caused by user-supplied configuration or input
    /// rather than by the run itself.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            Error::Config { .. }
                | Error::InvalidParam { .. }
                | Error::Parse { .. }
                | Error::UnknownScenario { .. }
                | Error::DimensionMismatch { .. }
                | Error::InvalidFeatures(_)
                | Error::InvalidTask(_)
        )
    }
}
