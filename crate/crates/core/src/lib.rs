//! Sentiment-informed daily stock forecasting.
//!
//! Tweets are scored with a lexicon, averaged per day and merged onto
//! adjusted closes. Recurrent networks (GRU, LSTM, stacked or bidirectional)
//! are implemented on a small dense-matrix core and compared against ARIMA and
//! persistence baselines with the metrics in [`eval`].

pub mod baselines;
pub mod eval;
pub mod ingest;
pub mod models;
pub mod numcore;
pub mod sentiment;
pub mod training;

pub use baselines::{ArimaConfig, ArimaOrder, BaselineError};
pub use eval::{ClassificationReport, EvalError, MetricsReport, ReportMetadata};
pub use ingest::{FeatureTable, IngestError, OhlcvBar, TweetRecord};
pub use models::{CellKind, Checkpoint, ModelError, Network, NetworkSpec};
pub use numcore::{Matrix, SeededRng};
pub use sentiment::{Lexicon, Scorer, SentimentError, SentimentLabel, SentimentScore};
pub use training::{DataConfig, PreparedData, SearchSpace, TrainConfig, TrainingError};
