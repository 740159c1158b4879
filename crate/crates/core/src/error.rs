use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty vocabulary: {0}")]
    EmptyVocabulary(String),

    #[error("invalid context offset {offset} for window {win}")]
    InvalidOffset { offset: i64, win: usize },

    #[error("index out of range: {what} {index} (limit {limit})")]
    OutOfRange { what: &'static str, index: u64, limit: u64 },

    #[error("integrity error: {0}")]
    Integrity(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{}:{line}: {msg}", path.display())]
    Parse { path: PathBuf, line: usize, msg: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("undefined correlation: {0}")]
    UndefinedCorrelation(&'static str),

    #[error("no covered items in evaluation set ({total} total)")]
    NoCoverage { total: usize },

    #[error("instance too large for exact evaluation: {cells} cells (limit {limit})")]
    TooLarge { cells: u64, limit: u64 },
}

impl Error {
    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { path: path.into(), line, msg: msg.into() }
    }
}

/// Attach a path to an I/O result.
pub(crate) trait IoContext<T> {
    fn at(self, path: &std::path::Path) -> Result<T>;
}

impl<T> IoContext<T> for io::Result<T> {
    fn at(self, path: &std::path::Path) -> Result<T> {
        self.map_err(|source| Error::Io { path: path.to_path_buf(), source })
    }
}
