use thiserror::Error;

/// Error type for all fallible library operations.
#[derive(Debug, Error)]
pub enum Error {
    /// An input point was outside its required domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Two arguments were defined over different alphabets.
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    /// A measure violated its declared floor or mass cap.
    #[error("floor violation: {0}")]
    FloorViolation(String),

    /// A shape (dimension, block count) did not match the ambient space.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// A projection oracle failed; carries the iteration index when known.
    #[error("projection failed at iteration {iteration}: {reason}")]
    Projection { iteration: usize, reason: String },

    /// An invariant the algorithm guarantees was observed to fail.
    /// Surfaced loudly rather than silently clamped.
    #[error("internal invariant violated: {0}")]
    Internal(String),

    /// Scenario configuration failed validation; all findings, not just the first.
    #[error("invalid configuration:\n{}", .0.join("\n"))]
    InvalidConfig(Vec<String>),

    /// A persisted file could not be parsed.
    #[error("corrupt file {path} at row {row}: {reason}")]
    CorruptFile {
        path: String,
        row: usize,
        reason: String,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
