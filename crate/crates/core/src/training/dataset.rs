use std::ops::Range;

use chrono::NaiveDate;

use crate::ingest::FeatureTable;

use super::config::DataConfig;
use super::scaler::{fit_scaler, ScaledSeries, ScalerParams};
use super::TrainingError;

/// Model feature columns, in window order.
pub const FEATURE_NAMES: [&str; 2] = ["adj_close", "sentiment"];

/// Contiguous train/validation/test partition of one table.
#[derive(Clone, Debug, PartialEq)]
pub struct Split {
    pub train: FeatureTable,
    pub val: FeatureTable,
    pub test: FeatureTable,
}

impl Split {
    /// Row index where validation starts and where test starts.
    pub fn boundaries(&self) -> (usize, usize) {
        (self.train.len(), self.train.len() + self.val.len())
    }
}

/// Chronological split with segment sizes `round(n·train_frac)`,
/// `round(n·val_frac)` and the remainder.
pub fn chrono_split(
    table: &FeatureTable,
    train_frac: f64,
    val_frac: f64,
    lookback: usize,
) -> Result<Split, TrainingError> {
    DataConfig {
        lookback: lookback.max(1),
        train_frac,
        val_frac,
    }
    .validate()?;
    let n = table.len();
    let n_train = (n as f64 * train_frac).round() as usize;
    let n_val = (n as f64 * val_frac).round() as usize;
    let n_test = n.saturating_sub(n_train + n_val);
    for (name, size) in [("train", n_train), ("validation", n_val), ("test", n_test)] {
        if size < lookback + 1 {
            return Err(TrainingError::InsufficientData(format!(
                "{name} segment has {size} rows, needs at least lookback + 1 = {}",
                lookback + 1
            )));
        }
    }
    Ok(Split {
        train: table.slice(0..n_train),
        val: table.slice(n_train..n_train + n_val),
        test: table.slice(n_train + n_val..n),
    })
}

/// Lookback windows paired with next-day targets.
#[derive(Clone, Debug, PartialEq)]
pub struct SupervisedWindows {
    /// `x[i]` has `lookback` rows of `feature_names.len()` features.
    pub x: Vec<Vec<Vec<f64>>>,
    pub y: Vec<f64>,
    pub lookback: usize,
    pub feature_names: Vec<String>,
    /// Row of the source series that each target comes from.
    pub target_rows: Vec<usize>,
}

impl SupervisedWindows {
    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn feature_count(&self) -> usize {
        self.feature_names.len()
    }
}

/// Every window of a series: targets are rows `lookback..len`.
pub fn make_windows(
    scaled: &ScaledSeries,
    lookback: usize,
    with_sentiment: bool,
) -> Result<SupervisedWindows, TrainingError> {
    if lookback == 0 || scaled.len() <= lookback {
        return Err(TrainingError::InsufficientData(format!(
            "{} rows cannot form a window with lookback {lookback}",
            scaled.len()
        )));
    }
    make_windows_in(scaled, lookback..scaled.len(), lookback, with_sentiment)
}

/// Windows whose targets are the rows in `targets`. Inputs may reach back
/// before `targets.start`, so a validation window can read the tail of the
/// training period without a training target ever entering validation.
pub fn make_windows_in(
    scaled: &ScaledSeries,
    targets: Range<usize>,
    lookback: usize,
    with_sentiment: bool,
) -> Result<SupervisedWindows, TrainingError> {
    if lookback == 0 {
        return Err(TrainingError::Config("lookback must be positive".into()));
    }
    if targets.start < lookback || targets.end > scaled.len() || targets.is_empty() {
        return Err(TrainingError::InsufficientData(format!(
            "targets {targets:?} need {lookback} prior rows inside a series of {}",
            scaled.len()
        )));
    }
    let n_feat = if with_sentiment { 2 } else { 1 };
    let mut x = Vec::with_capacity(targets.len());
    let mut y = Vec::with_capacity(targets.len());
    for t in targets.clone() {
        let window = (t - lookback..t)
            .map(|r| (0..n_feat).map(|f| scaled.columns[f][r]).collect())
            .collect();
        x.push(window);
        y.push(scaled.columns[0][t]);
    }
    Ok(SupervisedWindows {
        x,
        y,
        lookback,
        feature_names: FEATURE_NAMES[..n_feat].iter().map(|s| s.to_string()).collect(),
        target_rows: targets.collect(),
    })
}

/// Split, scaled and windowed data for one ticker.
#[derive(Clone, Debug)]
pub struct PreparedData {
    pub table: FeatureTable,
    pub scaler: ScalerParams,
    pub with_sentiment: bool,
    pub train: SupervisedWindows,
    pub val: SupervisedWindows,
    pub test: SupervisedWindows,
    /// Unscaled adj_close at each test target.
    pub test_actual: Vec<f64>,
    /// Unscaled adj_close on the day before each test target.
    pub test_previous: Vec<f64>,
    pub test_dates: Vec<NaiveDate>,
}

impl PreparedData {
    pub fn feature_count(&self) -> usize {
        self.train.feature_count()
    }

    /// Maps scaled adj_close predictions back to prices.
    pub fn unscale_prices(&self, scaled: &[f64]) -> Vec<f64> {
        scaled.iter().map(|&s| self.scaler.inverse_transform(0, s)).collect()
    }
}

/// Splits, fits the scaler on the training rows, scales the whole table with
/// it and builds windows for the three segments.
pub fn prepare(
    table: &FeatureTable,
    config: &DataConfig,
    with_sentiment: bool,
) -> Result<PreparedData, TrainingError> {
    config.validate()?;
    let split = chrono_split(table, config.train_frac, config.val_frac, config.lookback)?;
    let scaler = fit_scaler(&split.train)?;
    let scaled = scaler.transform_table(table);
    let (val_start, test_start) = split.boundaries();
    let lb = config.lookback;
    let train = make_windows_in(&scaled, lb..val_start, lb, with_sentiment)?;
    let val = make_windows_in(&scaled, val_start..test_start, lb, with_sentiment)?;
    let test = make_windows_in(&scaled, test_start..table.len(), lb, with_sentiment)?;
    let rows = table.rows();
    Ok(PreparedData {
        test_actual: test.target_rows.iter().map(|&r| rows[r].adj_close).collect(),
        test_previous: test.target_rows.iter().map(|&r| rows[r - 1].adj_close).collect(),
        test_dates: test.target_rows.iter().map(|&r| rows[r].date).collect(),
        table: table.clone(),
        scaler,
        with_sentiment,
        train,
        val,
        test,
    })
}
