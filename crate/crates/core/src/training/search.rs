use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::models::{Network, NetworkSpec};
use crate::numcore::SeededRng;

use super::config::{HyperParams, SearchSpace, TrainConfig};
use super::dataset::SupervisedWindows;
use super::history::TrainHistory;
use super::trainer::train_with_rng;
use super::TrainingError;

const SAMPLE_STREAM: u64 = 0x5EA4C4;
const TRIAL_STREAM_BASE: u64 = 1 << 32;

/// Outcome of one search trial.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub index: usize,
    pub params: HyperParams,
    /// Best-epoch validation loss; `None` when the trial failed.
    pub best_val_loss: Option<f64>,
    pub epochs_run: usize,
    pub error: Option<String>,
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub best_index: usize,
    pub best: HyperParams,
    pub trials: Vec<TrialResult>,
    pub network: Network,
    pub history: TrainHistory,
}

/// Draws `space.trials` configurations: units uniformly from the declared set,
/// dropout uniformly, learning rate log-uniformly.
pub fn sample_candidates(space: &SearchSpace, rng: &SeededRng) -> Result<Vec<HyperParams>, TrainingError> {
    space.validate()?;
    let mut r = rng.split(SAMPLE_STREAM);
    let (ln_lo, ln_hi) = (space.lr_min.ln(), space.lr_max.ln());
    Ok((0..space.trials)
        .map(|_| {
            let units = space.units[(r.uniform() * space.units.len() as f64) as usize % space.units.len()];
            let dropout_rate = space.dropout_min + r.uniform() * (space.dropout_max - space.dropout_min);
            let learning_rate = (ln_lo + r.uniform() * (ln_hi - ln_lo)).exp().clamp(space.lr_min, space.lr_max);
            HyperParams {
                units,
                dropout_rate,
                learning_rate,
            }
        })
        .collect())
}

/// Trains every candidate (in parallel) and keeps the lowest best-epoch
/// validation loss, breaking ties toward the lower index.
///
/// Trial `i` trains on the child stream `rng.split(2^32 + i)`, so results do
/// not depend on scheduling.
pub fn evaluate_candidates(
    candidates: &[HyperParams],
    template: &NetworkSpec,
    train: &SupervisedWindows,
    val: &SupervisedWindows,
    config: &TrainConfig,
    rng: &SeededRng,
) -> Result<SearchOutcome, TrainingError> {
    if candidates.is_empty() {
        return Err(TrainingError::Config("search needs at least one trial".into()));
    }
    let runs: Vec<Result<(Network, TrainHistory), TrainingError>> = candidates
        .par_iter()
        .enumerate()
        .map(|(i, hp)| {
            let spec = NetworkSpec {
                units: hp.units,
                dropout_rate: hp.dropout_rate,
                ..template.clone()
            };
            let cfg = TrainConfig {
                learning_rate: hp.learning_rate.max(config.min_lr),
                ..config.clone()
            };
            train_with_rng(&spec, train, val, &cfg, &rng.split(TRIAL_STREAM_BASE + i as u64))
        })
        .collect();

    let mut trials = Vec::with_capacity(runs.len());
    let mut best: Option<(usize, f64)> = None;
    for (i, run) in runs.iter().enumerate() {
        let (loss, epochs, error) = match run {
            Ok((_, hist)) => (hist.best_val_loss(), hist.len(), None),
            Err(e) => (None, 0, Some(e.to_string())),
        };
        if let Some(l) = loss {
            if best.map_or(true, |(_, b)| l < b) {
                best = Some((i, l));
            }
        }
        trials.push(TrialResult {
            index: i,
            params: candidates[i].clone(),
            best_val_loss: loss,
            epochs_run: epochs,
            error,
        });
    }
    let (best_index, _) = best.ok_or(TrainingError::SearchFailed {
        trials: candidates.len(),
    })?;
    let (network, history) = runs
        .into_iter()
        .nth(best_index)
        .expect("index in range")
        .expect("best trial succeeded");
    Ok(SearchOutcome {
        best_index,
        best: candidates[best_index].clone(),
        trials,
        network,
        history,
    })
}

/// Random search over `space`. A trial that fails (for example by diverging)
/// is recorded and skipped; the search fails only if every trial does.
pub fn random_search(
    space: &SearchSpace,
    template: &NetworkSpec,
    train: &SupervisedWindows,
    val: &SupervisedWindows,
    config: &TrainConfig,
    rng: &SeededRng,
) -> Result<SearchOutcome, TrainingError> {
    let candidates = sample_candidates(space, rng)?;
    evaluate_candidates(&candidates, template, train, val, config, rng)
}
