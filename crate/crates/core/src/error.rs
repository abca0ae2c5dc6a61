use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain: {0}")]
    Domain(String),

    /// A numerical procedure stopped before reaching its tolerance.
    #[error("numeric: {message} (achieved tolerance {achieved:e})")]
    Numeric {
        message: String,
        achieved: f64,
        partial: Option<f64>,
    },

    /// An internal invariant was violated by the caller.
    #[error("logic: {0}")]
    Logic(String),

    /// Configuration rejected. `line` is 1-based; `None` when the value came
    /// from a command-line override.
    #[error("config: key `{key}`{}: {message}", line.map(|l| format!(" (line {l})")).unwrap_or_default())]
    Config {
        key: String,
        line: Option<usize>,
        message: String,
    },

    #[error("io: {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Short machine-readable tag for the error class.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Numeric { .. } => "numeric",
            Error::Logic(_) => "logic",
            Error::Config { .. } => "config",
            Error::Io { .. } => "io",
        }
    }
}
