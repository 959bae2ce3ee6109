use std::path::PathBuf;

use thiserror::Error;

/// What went wrong while reading a dataset line.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("malformed record: {0}")]
    Malformed(String),
    #[error("unknown outcome symbol {0:?}")]
    UnknownSymbol(char),
    #[error("ragged shot grid: expected {expected} {what}, found {found}")]
    Ragged {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("duplicate sample id {0:?}")]
    DuplicateId(String),
    #[error("sample has no shots")]
    EmptySample,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {kind}")]
    Parse { line: usize, kind: ParseErrorKind },

    #[error("no samples")]
    NoSamples,

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(line: usize, kind: ParseErrorKind) -> Self {
        Error::Parse { line, kind }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
