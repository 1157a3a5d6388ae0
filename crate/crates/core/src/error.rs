use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter or preset is invalid.
    #[error("configuration error: {0}")]
    Config(String),

    /// A buffer has the wrong length or an index is out of range.
    #[error("input shape error: {0}")]
    Shape(String),

    /// A scenario file violates the schema or a scenario invariant.
    #[error("{path}: [{section}] {key}: {message}")]
    Scenario {
        path: PathBuf,
        section: String,
        key: String,
        message: String,
    },

    #[error("{path}: no campaigns defined")]
    NoCampaigns { path: PathBuf },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn shape(msg: impl Into<String>) -> Self {
        Error::Shape(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by user input rather than the runtime environment.
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Io { .. })
    }
}
