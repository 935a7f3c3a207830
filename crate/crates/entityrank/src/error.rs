use std::path::{Path, PathBuf};

use thiserror::Error;

/// File and pipeline errors. Anything tied to a place in an input file names
/// the file and, where there is one, the 1-based line.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: line {line}: {msg}", path.display())]
    Parse { path: PathBuf, line: usize, msg: String },
    #[error("{}: malformed header: {msg}", path.display())]
    MalformedHeader { path: PathBuf, msg: String },
    #[error("{}: line {line}: expected {expected} values, found {found}", path.display())]
    DimensionMismatch {
        path: PathBuf,
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("{}: zero-norm vector for word {word:?}", path.display())]
    ZeroNormVector { path: PathBuf, word: String },
    #[error("{}: unexpected end of file", path.display())]
    UnexpectedEof { path: PathBuf },
    #[error("{}: {msg}", path.display())]
    Invalid { path: PathBuf, msg: String },
    #[error(transparent)]
    Core(#[from] entityrank_core::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        if source.kind() == std::io::ErrorKind::UnexpectedEof {
            return Error::UnexpectedEof { path: path.into() };
        }
        Error::Io { path: path.into(), source }
    }

    pub(crate) fn parse(path: &Path, line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            msg: msg.into(),
        }
    }

    pub(crate) fn invalid(path: &Path, msg: impl Into<String>) -> Self {
        Error::Invalid {
            path: path.into(),
            msg: msg.into(),
        }
    }

    /// Line number of the offending input, when the error has one.
    pub fn line(&self) -> Option<usize> {
        match self {
            Error::Parse { line, .. } | Error::DimensionMismatch { line, .. } => Some(*line),
            _ => None,
        }
    }
}
