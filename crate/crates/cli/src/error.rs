use std::path::PathBuf;

use ambistl_core::corpus::CorpusError;
use ambistl_core::lexicon::LexiconError;
use ambistl_core::trajectory::{RegionError, TrajectoryError};
use ambistl_core::TranslateError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Translate(#[from] TranslateError),
    #[error("unknown atom phi_{0}: no region of that name")]
    UnknownAtom(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: {message}", path.display())]
    Input { path: PathBuf, message: String },
    #[error("expectation mismatch in {}", ids.join(", "))]
    Mismatch { ids: Vec<String> },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Translate(_) | CliError::UnknownAtom(_) => 2,
            CliError::Io { .. } | CliError::Input { .. } => 3,
            CliError::Mismatch { .. } => 4,
        }
    }
}

macro_rules! input_from {
    ($($ty:ty),*) => {$(
        impl From<(PathBuf, $ty)> for CliError {
            fn from((path, e): (PathBuf, $ty)) -> Self {
                CliError::Input { path, message: e.to_string() }
            }
        }
    )*};
}

input_from!(CorpusError, LexiconError, RegionError, TrajectoryError);
