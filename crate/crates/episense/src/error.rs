use std::io;
use std::path::Path;

use episense_core::concepts::ConceptError;
use episense_core::corpus::CorpusError;
use episense_core::explain::ExplainError;
use episense_core::regress::RegressError;
use episense_core::sentiment::SentimentError;
use episense_core::series::SeriesError;
use episense_core::synth::SynthError;
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_CONFIG: i32 = 3;

/// Every failure is either bad input data (exit 2) or a bad setting (exit 3).
#[derive(Debug, Error)]
pub enum CliError {
    #[error("data error: {0}")]
    Data(String),
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;

impl CliError {
    pub fn data(msg: impl Into<String>) -> Self {
        CliError::Data(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    pub fn io(path: &Path, err: io::Error) -> Self {
        CliError::Data(format!("{}: {err}", path.display()))
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Data(_) => EXIT_DATA,
            CliError::Config(_) => EXIT_CONFIG,
        }
    }

    /// Prefixes the message with where it happened.
    pub fn context(self, what: impl std::fmt::Display) -> Self {
        match self {
            CliError::Data(m) => CliError::Data(format!("{what}: {m}")),
            CliError::Config(m) => CliError::Config(format!("{what}: {m}")),
        }
    }
}

impl From<CorpusError> for CliError {
    fn from(e: CorpusError) -> Self {
        match e {
            CorpusError::InvalidRange { .. } => CliError::Config(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<SeriesError> for CliError {
    fn from(e: SeriesError) -> Self {
        match e {
            SeriesError::InvalidConfig(_) | SeriesError::NonPositiveFactor(_) => CliError::Config(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<ConceptError> for CliError {
    fn from(e: ConceptError) -> Self {
        match e {
            ConceptError::InvalidConfig(_) | ConceptError::InvalidRange { .. } => CliError::Config(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<SentimentError> for CliError {
    fn from(e: SentimentError) -> Self {
        match e {
            SentimentError::InvalidRange { .. } | SentimentError::ZeroNegationWindow => CliError::Config(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<RegressError> for CliError {
    fn from(e: RegressError) -> Self {
        match e {
            RegressError::InvalidConfig(_) => CliError::Config(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<ExplainError> for CliError {
    fn from(e: ExplainError) -> Self {
        match e {
            ExplainError::InvalidConfig(_) => CliError::Config(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<SynthError> for CliError {
    fn from(e: SynthError) -> Self {
        CliError::Config(e.to_string())
    }
}
