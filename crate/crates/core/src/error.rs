use std::path::PathBuf;

/// Errors surfaced by the library.
///
/// `Domain` and `FieldMismatch` are caller mistakes (bad arguments); the CLI
/// maps them to usage-error exits. `Inconsistency` means an exact identity
/// that must hold by construction failed, i.e. a bug or corrupted input.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid base field q={q}: {reason}")]
    InvalidField { q: u64, reason: &'static str },

    #[error("operands belong to different base fields (q={left} vs q={right})")]
    FieldMismatch { left: u64, right: u64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("numerical error: {0}")]
    Numerical(String),

    #[error("internal consistency failure: {0}")]
    Inconsistency(String),

    #[error(
        "checkpoint mismatch at {path}: {field} is {found} in the checkpoint but {expected} was requested"
    )]
    CheckpointMismatch {
        path: PathBuf,
        field: &'static str,
        found: String,
        expected: String,
    },

    #[error("malformed checkpoint {path}: {reason}")]
    CheckpointCorrupt { path: PathBuf, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn inconsistency(msg: impl Into<String>) -> Self {
        Error::Inconsistency(msg.into())
    }

    /// True for errors caused by bad input rather than failed verification.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::InvalidField { .. }
                | Error::FieldMismatch { .. }
                | Error::Domain(_)
                | Error::Parse(_)
                | Error::CheckpointMismatch { .. }
        )
    }
}
