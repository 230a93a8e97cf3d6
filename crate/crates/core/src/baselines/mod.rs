//! ARIMA(p,d,q) fitted by conditional sum of squares, walk-forward
//! forecasting, and the persistence baseline.

mod arima;
mod difference;
mod nelder_mead;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use arima::{fit_css, forecast_walk, is_stationary, ArimaConfig, ArimaModel, WalkForecast};
pub use difference::{difference, difference_with_anchors, undifference};
pub use nelder_mead::{nelder_mead, NelderMeadOptions, NelderMeadResult};

/// Largest p, d or q accepted.
pub const MAX_ORDER: usize = 5;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BaselineError {
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("invalid ARIMA order: {0}")]
    Order(String),
    #[error("CSS fit did not converge after {iterations} iterations (best CSS {best_css})")]
    NoConvergence {
        iterations: usize,
        best_css: f64,
        best: Box<ArimaModel>,
    },
    #[error("walk-forward step {step}: {source}")]
    Forecast {
        step: usize,
        #[source]
        source: Box<BaselineError>,
    },
    #[error("invalid input: {0}")]
    Input(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ArimaOrder {
    pub p: usize,
    pub d: usize,
    pub q: usize,
}

impl ArimaOrder {
    pub fn new(p: usize, d: usize, q: usize) -> Result<Self, BaselineError> {
        let o = Self { p, d, q };
        o.validate()?;
        Ok(o)
    }

    pub fn validate(&self) -> Result<(), BaselineError> {
        if self.p > MAX_ORDER || self.d > MAX_ORDER || self.q > MAX_ORDER {
            return Err(BaselineError::Order(format!(
                "{self}: p, d and q must each be at most {MAX_ORDER}"
            )));
        }
        Ok(())
    }
}

impl fmt::Display for ArimaOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.p, self.d, self.q)
    }
}

impl FromStr for ArimaOrder {
    type Err = BaselineError;

    /// Parses `p,d,q`, optionally wrapped in parentheses.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(BaselineError::Order(format!("expected p,d,q, got {s:?}")));
        }
        let n = |x: &str| {
            x.parse::<usize>()
                .map_err(|_| BaselineError::Order(format!("{x:?} is not a non-negative integer")))
        };
        Self::new(n(parts[0])?, n(parts[1])?, n(parts[2])?)
    }
}

/// Naive forecast: tomorrow equals today.
pub fn persistence(history: &[f64]) -> Result<f64, BaselineError> {
    history
        .last()
        .copied()
        .ok_or_else(|| BaselineError::InsufficientData("persistence needs one observation".into()))
}

/// Walk-forward persistence: the prediction for `test[i]` is the value
/// observed just before it.
pub fn persistence_walk(history: &[f64], test: &[f64]) -> Result<Vec<f64>, BaselineError> {
    let mut prev = persistence(history)?;
    Ok(test
        .iter()
        .map(|&y| {
            let p = prev;
            prev = y;
            p
        })
        .collect())
}
