use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// PGM decoding failure. `offset` is the byte position where decoding stopped.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PgmError {
    #[error("unsupported magic number at byte {offset} (expected P2 or P5)")]
    BadMagic { offset: usize },
    #[error("malformed header token at byte {offset}")]
    BadToken { offset: usize },
    #[error("zero image dimension at byte {offset}")]
    ZeroDimension { offset: usize },
    #[error("maxval {maxval} at byte {offset} is outside 1..=255")]
    BadMaxval { offset: usize, maxval: u64 },
    #[error("truncated pixel data at byte {offset}")]
    Truncated { offset: usize },
    #[error("sample value {value} at byte {offset} exceeds maxval {maxval}")]
    SampleOutOfRange { offset: usize, value: u64, maxval: u64 },
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Pgm(#[from] PgmError),
    #[error("{}: {source}", path.display())]
    ImageFile { path: PathBuf, source: PgmError },
    #[error("cannot read {}: {source}", path.display())]
    Input { path: PathBuf, source: io::Error },
    #[error("cannot write {}: {source}", path.display())]
    Output { path: PathBuf, source: io::Error },
    #[error("invalid image: {0}")]
    InvalidImage(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("dataset error: {0}")]
    Dataset(String),
    #[error("regression error: {0}")]
    Regression(String),
    #[error("classification error: {0}")]
    Classification(String),
    #[error("invalid config: {0}")]
    Config(String),
}

impl Error {
    /// True when the error was caused by bad user input rather than an
    /// internal failure. The CLI maps these to exit code 2.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::Output { .. })
    }
}
