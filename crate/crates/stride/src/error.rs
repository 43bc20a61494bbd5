use std::io;
use std::path::PathBuf;

use stride_core::{DetectorError, DistanceError, PreprocessError, SynthError, TraceError};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },

    /// Malformed CSV content; `line` is 1-based and counts header and
    /// comment lines.
    #[error("{}: line {line}: {message}", path.display())]
    Parse { path: PathBuf, line: usize, message: String },

    #[error("{}: {source}", path.display())]
    Trace { path: PathBuf, source: TraceError },

    #[error("{}: {source}", path.display())]
    Json { path: PathBuf, source: serde_json::Error },

    #[error("{}: cannot read config: {source}", path.display())]
    ConfigRead { path: PathBuf, source: io::Error },

    #[error("{}: invalid config: {source}", path.display())]
    ConfigFile { path: PathBuf, source: serde_json::Error },

    #[error("{}: invalid gait profile: {source}", path.display())]
    Profile { path: PathBuf, source: serde_json::Error },

    /// A manifest entry whose recorded seed or digest does not match its
    /// profile.
    #[error("{}: {message}", path.display())]
    Manifest { path: PathBuf, message: String },

    #[error("invalid config: {0}")]
    Config(String),

    #[error("{0}")]
    Synth(#[from] SynthError),

    #[error("{0}")]
    Preprocess(#[from] PreprocessError),

    #[error("{0}")]
    Detector(#[from] DetectorError),

    #[error("{0}")]
    Distance(#[from] DistanceError),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Self::Io { path: path.into(), source }
    }

    /// Process exit status: 2 for bad configuration or profiles, 1 for
    /// everything that went wrong with files or data.
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::ConfigRead { .. }
            | Self::ConfigFile { .. }
            | Self::Config(_)
            | Self::Profile { .. }
            | Self::Detector(_)
            | Self::Distance(_) => 2,
            Self::Synth(SynthError::InvalidProfile(_)) => 2,
            Self::Preprocess(PreprocessError::InvalidParams(_)) => 2,
            _ => 1,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
