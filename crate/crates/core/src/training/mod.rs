//! Chronological splits, min-max scaling, windowing, the training loop with
//! plateau/early-stopping callbacks, and random hyperparameter search.

mod config;
mod dataset;
mod history;
mod scaler;
mod search;
mod trainer;

use thiserror::Error;

use crate::ingest::IngestError;
use crate::models::ModelError;
use crate::numcore::NumError;

pub use config::{DataConfig, HyperParams, SearchSpace, TrainConfig};
pub use dataset::{
    chrono_split, make_windows, make_windows_in, prepare, PreparedData, Split, SupervisedWindows,
    FEATURE_NAMES,
};
pub use history::{EpochRecord, TrainEvent, TrainHistory};
pub use scaler::{fit_scaler, ScaledSeries, ScalerParams};
pub use search::{evaluate_candidates, random_search, sample_candidates, SearchOutcome, TrialResult};
pub use trainer::{evaluate_mse, predict_all, train, train_with_rng};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TrainingError {
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("invalid training configuration: {0}")]
    Config(String),
    #[error("training diverged at epoch {epoch}: {msg}")]
    Divergence { epoch: usize, msg: String },
    #[error("random search failed: all {trials} trials diverged")]
    SearchFailed { trials: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Ingest(#[from] IngestError),
}

impl From<NumError> for TrainingError {
    fn from(e: NumError) -> Self {
        TrainingError::Model(ModelError::Num(e))
    }
}
