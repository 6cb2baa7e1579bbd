use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of an operation (n = 0, empty table, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Position, lag or arithmetic range violated.
    #[error("range error: {0}")]
    Range(String),

    #[error("malformed Dyck word {word:?}: {reason}")]
    MalformedWord { word: String, reason: String },

    /// Corrupt or unexpected corpus bytes. `position` is the 1-based text position
    /// being read when the problem was found, when known.
    #[error("format error at position {position:?}: {reason}")]
    Format {
        position: Option<u64>,
        reason: String,
    },

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn range(msg: impl Into<String>) -> Self {
        Error::Range(msg.into())
    }

    pub(crate) fn format(position: Option<u64>, reason: impl Into<String>) -> Self {
        Error::Format {
            position,
            reason: reason.into(),
        }
    }
}
