use std::path::PathBuf;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Inconsistent dimensions or malformed structural data.
    #[error("structural error: {0}")]
    Structure(String),

    /// Attempted mutation of the original graph blocks.
    #[error("immutability violation: {0}")]
    Immutability(String),

    /// A flip precondition was violated (add on a 1, drop on a 0, diagonal of C).
    #[error("constraint violation: {0}")]
    Constraint(String),

    /// Non-finite value produced during a numeric computation.
    #[error("numerical error in {layer}: {detail}")]
    Numeric { layer: &'static str, detail: String },

    /// Invalid configuration (empty labeled set, zero epochs, bad fractions, ...).
    #[error("configuration error: {0}")]
    Config(String),

    /// Malformed input file.
    #[error("parse error in {file}:{line}: {msg}")]
    Parse {
        file: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Stable category name, used by the CLI to derive exit codes.
    pub fn category(&self) -> &'static str {
        match self {
            Error::Structure(_) => "structure",
            Error::Immutability(_) => "immutability",
            Error::Constraint(_) => "constraint",
            Error::Numeric { .. } => "numeric",
            Error::Config(_) => "config",
            Error::Parse { .. } => "parse",
            Error::Io { .. } => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
