use thiserror::Error;

/// Errors raised by constructions, checks and file handling.
#[derive(Debug, Error)]
pub enum Error {
    /// Caller supplied arguments that violate an operation's precondition.
    #[error("invalid input: {0}")]
    Input(String),

    /// The operation would break a structural invariant of the code
    /// (for example two codewords merging when a coordinate is deleted).
    #[error("structural error: {0}")]
    Structure(String),

    /// Malformed code file, bijection file or automorphism file.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// The requested size exceeds what the exact algorithms are allowed to handle.
    #[error("capability exceeded: {0}")]
    Capability(String),

    /// An internal construction failed its own validation.
    #[error("construction failed: {0}")]
    Construction(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}
