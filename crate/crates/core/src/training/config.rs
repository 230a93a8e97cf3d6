use serde::{Deserialize, Serialize};

use super::TrainingError;

/// Windowing and split settings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DataConfig {
    pub lookback: usize,
    pub train_frac: f64,
    pub val_frac: f64,
}

impl Default for DataConfig {
    fn default() -> Self {
        Self {
            lookback: 30,
            train_frac: 0.70,
            val_frac: 0.15,
        }
    }
}

impl DataConfig {
    pub fn validate(&self) -> Result<(), TrainingError> {
        if self.lookback == 0 {
            return Err(TrainingError::Config("lookback must be positive".into()));
        }
        if !(self.train_frac > 0.0 && self.val_frac > 0.0 && self.train_frac + self.val_frac < 1.0) {
            return Err(TrainingError::Config(format!(
                "split fractions must be positive with train + val < 1, got {} + {}",
                self.train_frac, self.val_frac
            )));
        }
        Ok(())
    }
}

/// Optimizer and callback settings for one training run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainConfig {
    pub max_epochs: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub early_stop_patience: usize,
    pub lr_reduce_factor: f64,
    pub lr_reduce_patience: usize,
    pub min_lr: f64,
    /// Improvement smaller than this does not reset the callback counters.
    pub min_delta: f64,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            max_epochs: 200,
            batch_size: 32,
            learning_rate: 1e-3,
            early_stop_patience: 10,
            lr_reduce_factor: 0.5,
            lr_reduce_patience: 5,
            min_lr: 1e-5,
            min_delta: 0.0,
            seed: 42,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<(), TrainingError> {
        let fail = |m: String| Err(TrainingError::Config(m));
        if self.batch_size == 0 {
            return fail("batch_size must be positive".into());
        }
        if self.early_stop_patience == 0 || self.lr_reduce_patience == 0 {
            return fail("patience values must be at least 1".into());
        }
        if !(self.lr_reduce_factor > 0.0 && self.lr_reduce_factor < 1.0) {
            return fail(format!("lr_reduce_factor must lie in (0, 1), got {}", self.lr_reduce_factor));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return fail(format!("learning_rate must be positive, got {}", self.learning_rate));
        }
        if !(self.min_lr > 0.0) {
            return fail(format!("min_lr must be positive, got {}", self.min_lr));
        }
        if self.learning_rate < self.min_lr {
            return fail(format!(
                "learning_rate {} is below min_lr {}",
                self.learning_rate, self.min_lr
            ));
        }
        if !(self.min_delta >= 0.0) {
            return fail("min_delta must be non-negative".into());
        }
        Ok(())
    }
}

/// One point of the search space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HyperParams {
    pub units: usize,
    pub dropout_rate: f64,
    pub learning_rate: f64,
}

/// Random-search bounds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchSpace {
    pub units: Vec<usize>,
    pub dropout_min: f64,
    pub dropout_max: f64,
    pub lr_min: f64,
    pub lr_max: f64,
    pub trials: usize,
}

impl Default for SearchSpace {
    fn default() -> Self {
        Self {
            units: vec![32, 50, 64, 96, 128],
            dropout_min: 0.0,
            dropout_max: 0.5,
            lr_min: 1e-4,
            lr_max: 1e-2,
            trials: 20,
        }
    }
}

impl SearchSpace {
    pub fn validate(&self) -> Result<(), TrainingError> {
        let fail = |m: &str| Err(TrainingError::Config(m.into()));
        if self.units.is_empty() || self.units.contains(&0) {
            return fail("search units must be a non-empty list of positive sizes");
        }
        if !(0.0 <= self.dropout_min && self.dropout_min <= self.dropout_max && self.dropout_max < 1.0) {
            return fail("dropout bounds must satisfy 0 <= min <= max < 1");
        }
        if !(0.0 < self.lr_min && self.lr_min <= self.lr_max && self.lr_max.is_finite()) {
            return fail("learning-rate bounds must satisfy 0 < min <= max");
        }
        if self.trials == 0 {
            return fail("trials must be at least 1");
        }
        Ok(())
    }

    pub fn contains(&self, hp: &HyperParams) -> bool {
        self.units.contains(&hp.units)
            && (self.dropout_min..=self.dropout_max).contains(&hp.dropout_rate)
            && (self.lr_min..=self.lr_max).contains(&hp.learning_rate)
    }
}
