use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),

    /// A file could not be parsed (Netpbm, WAV, sidecar, config).
    #[error("malformed {what}: {detail}")]
    Format { what: &'static str, detail: String },

    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("payload kind mismatch: expected {expected}, got {got}")]
    KindMismatch {
        expected: &'static str,
        got: &'static str,
    },

    /// The payload needs more carrier blocks than the band provides.
    #[error("capacity shortfall in {slot}: need {needed} blocks, {available} available")]
    Capacity {
        slot: String,
        needed: usize,
        available: usize,
    },
}

impl Error {
    pub(crate) fn format(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Format {
            what,
            detail: detail.into(),
        }
    }
}
