use gru_vader_core::baselines::BaselineError;
use gru_vader_core::eval::EvalError;
use gru_vader_core::ingest::IngestError;
use gru_vader_core::models::ModelError;
use gru_vader_core::sentiment::SentimentError;
use gru_vader_core::training::TrainingError;
use thiserror::Error;

/// Failures grouped by the exit code they map to.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("data: {0}")]
    Data(String),
    #[error("numerical: {0}")]
    Numerical(String),
}

impl CliError {
    /// 2 usage, 3 data, 4 numerical.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Data(_) => 3,
            CliError::Numerical(_) => 4,
        }
    }

    pub fn context(self, what: &str) -> Self {
        match self {
            CliError::Usage(m) => CliError::Usage(format!("{what}: {m}")),
            CliError::Data(m) => CliError::Data(format!("{what}: {m}")),
            CliError::Numerical(m) => CliError::Numerical(format!("{what}: {m}")),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<IngestError> for CliError {
    fn from(e: IngestError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<SentimentError> for CliError {
    fn from(e: SentimentError) -> Self {
        match e {
            SentimentError::Config(_) => CliError::Usage(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::Config(_) => CliError::Usage(e.to_string()),
            ModelError::Checkpoint { .. } | ModelError::Version { .. } | ModelError::Io(_) => {
                CliError::Data(e.to_string())
            }
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<TrainingError> for CliError {
    fn from(e: TrainingError) -> Self {
        match e {
            TrainingError::Config(_) => CliError::Usage(e.to_string()),
            TrainingError::InsufficientData(_) => CliError::Data(e.to_string()),
            TrainingError::Ingest(inner) => inner.into(),
            TrainingError::Model(inner) => inner.into(),
            TrainingError::Divergence { .. } | TrainingError::SearchFailed { .. } => {
                CliError::Numerical(e.to_string())
            }
        }
    }
}

impl From<BaselineError> for CliError {
    fn from(e: BaselineError) -> Self {
        match e {
            BaselineError::Order(_) => CliError::Usage(e.to_string()),
            BaselineError::InsufficientData(_) | BaselineError::Input(_) => CliError::Data(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::Length { .. } | EvalError::TooFew { .. } | EvalError::DegreesOfFreedom { .. } => {
                CliError::Data(e.to_string())
            }
            _ => CliError::Numerical(e.to_string()),
        }
    }
}
