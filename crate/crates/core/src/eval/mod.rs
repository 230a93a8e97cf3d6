//! Classification and regression metrics, correlation, risk/return and
//! residual Q–Q diagnostics.

mod classification;
mod qq;
mod regression;

use thiserror::Error;

pub use classification::{classification_report, ClassMetrics, ClassificationReport, ConfusionMatrix3};
pub use qq::{inverse_normal_cdf, qq_points, QqSeries};
pub use regression::{pearson, regression_metrics, risk_return, returns, MetricsReport, ReportMetadata, RiskReturn};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("length mismatch: {left} vs {right}")]
    Length { left: usize, right: usize },
    #[error("need at least {needed} values, got {actual}")]
    TooFew { needed: usize, actual: usize },
    #[error("n = {n} leaves no degrees of freedom for k = {k} predictors")]
    DegreesOfFreedom { n: usize, k: usize },
    #[error("R² is undefined: actual values are constant")]
    ConstantActual,
    #[error("correlation is undefined: {0} is constant")]
    UndefinedCorrelation(&'static str),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("non-finite input")]
    NonFinite,
}

pub(crate) fn same_len(a: usize, b: usize) -> Result<(), EvalError> {
    if a == b {
        Ok(())
    } else {
        Err(EvalError::Length { left: a, right: b })
    }
}

pub(crate) fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation (n − 1 denominator).
pub(crate) fn sample_std(xs: &[f64]) -> f64 {
    let m = mean(xs);
    (xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}
