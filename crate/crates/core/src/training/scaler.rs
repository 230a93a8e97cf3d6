use serde::{Deserialize, Serialize};

use crate::ingest::FeatureTable;

use super::dataset::FEATURE_NAMES;
use super::TrainingError;

/// Per-feature min-max parameters learned from the training split.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalerParams {
    pub names: Vec<String>,
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

impl ScalerParams {
    /// Fits one `[min, max]` per column. Columns must be non-empty.
    pub fn fit_columns(names: &[&str], columns: &[&[f64]]) -> Result<Self, TrainingError> {
        if names.len() != columns.len() {
            return Err(TrainingError::Config("one name per column required".into()));
        }
        let mut min = Vec::with_capacity(columns.len());
        let mut max = Vec::with_capacity(columns.len());
        for (name, col) in names.iter().zip(columns) {
            if col.is_empty() {
                return Err(TrainingError::InsufficientData("cannot fit a scaler on no rows".into()));
            }
            let lo = col.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = col.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            if !lo.is_finite() || !hi.is_finite() {
                return Err(TrainingError::Config(format!("feature {name} has non-finite values")));
            }
            if lo == hi {
                log::warn!("feature {name} is constant ({lo}) on the training split; it scales to 0.0");
            }
            min.push(lo);
            max.push(hi);
        }
        Ok(Self {
            names: names.iter().map(|s| s.to_string()).collect(),
            min,
            max,
        })
    }

    /// Constant on the training split.
    pub fn is_degenerate(&self, feature: usize) -> bool {
        self.max[feature] == self.min[feature]
    }

    pub fn degenerate_features(&self) -> Vec<&str> {
        (0..self.names.len())
            .filter(|&i| self.is_degenerate(i))
            .map(|i| self.names[i].as_str())
            .collect()
    }

    pub fn transform(&self, feature: usize, x: f64) -> f64 {
        if self.is_degenerate(feature) {
            0.0
        } else {
            (x - self.min[feature]) / (self.max[feature] - self.min[feature])
        }
    }

    pub fn inverse_transform(&self, feature: usize, s: f64) -> f64 {
        if self.is_degenerate(feature) {
            self.min[feature]
        } else {
            self.min[feature] + s * (self.max[feature] - self.min[feature])
        }
    }

    /// Scales both model features of a table.
    pub fn transform_table(&self, table: &FeatureTable) -> ScaledSeries {
        let raw = [table.adj_close(), table.sentiment()];
        ScaledSeries {
            columns: raw
                .iter()
                .enumerate()
                .map(|(f, col)| col.iter().map(|&x| self.transform(f, x)).collect())
                .collect(),
        }
    }
}

/// Fits adj_close and sentiment scaling on the training rows only.
pub fn fit_scaler(train: &FeatureTable) -> Result<ScalerParams, TrainingError> {
    let adj = train.adj_close();
    let sent = train.sentiment();
    ScalerParams::fit_columns(&FEATURE_NAMES, &[&adj, &sent])
}

/// Scaled feature columns in [`FEATURE_NAMES`] order.
#[derive(Clone, Debug, PartialEq)]
pub struct ScaledSeries {
    pub columns: Vec<Vec<f64>>,
}

impl ScaledSeries {
    pub fn len(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn midpoint_and_round_trip() {
        let s = ScalerParams::fit_columns(&["x"], &[&[1.0, 3.0]]).unwrap();
        assert_eq!(s.transform(0, 2.0), 0.5);
        assert!((s.inverse_transform(0, s.transform(0, 2.7)) - 2.7).abs() < 1e-12);
    }

    #[test]
    fn constant_feature_is_flagged() {
        let s = ScalerParams::fit_columns(&["a", "b"], &[&[1.0, 2.0], &[0.0, 0.0]]).unwrap();
        assert_eq!(s.degenerate_features(), vec!["b"]);
        assert_eq!(s.transform(1, 0.0), 0.0);
        assert_eq!(s.transform(1, 0.7), 0.0);
    }

    #[test]
    fn empty_column_rejected() {
        assert!(ScalerParams::fit_columns(&["a"], &[&[]]).is_err());
    }
}
