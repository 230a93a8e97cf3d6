//! GRU and LSTM regressors with hand-derived backpropagation through time.

mod checkpoint;
mod dropout;
mod gru;
mod lstm;
mod network;

use thiserror::Error;

use crate::numcore::NumError;

pub use checkpoint::{Checkpoint, CHECKPOINT_MAGIC, CHECKPOINT_VERSION};
pub use dropout::dropout;
pub use gru::{GruCell, GruStepCache};
pub use lstm::{LstmCell, LstmStepCache};
pub use network::{
    CellKind, ForwardCache, Gradients, LayerCache, Network, NetworkSpec, RecurrentCell,
    RecurrentLayer, SequenceCache,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("{what}: expected length {expected}, got {actual}")]
    Dimension {
        what: &'static str,
        expected: usize,
        actual: usize,
    },
    #[error(transparent)]
    Num(#[from] NumError),
    #[error("invalid model configuration: {0}")]
    Config(String),
    #[error("stale or mismatched forward cache: {0}")]
    StaleCache(String),
    #[error("checkpoint line {line}: {msg}")]
    Checkpoint { line: usize, msg: String },
    #[error("checkpoint version {found} is not supported (expected {expected})")]
    Version { found: u32, expected: u32 },
    #[error("checkpoint i/o: {0}")]
    Io(String),
}

impl ModelError {
    pub(crate) fn dims(what: &'static str, expected: usize, actual: usize) -> Self {
        ModelError::Dimension {
            what,
            expected,
            actual,
        }
    }
}
