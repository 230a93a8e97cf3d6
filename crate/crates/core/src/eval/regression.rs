use serde::{Deserialize, Serialize};

use crate::ingest::OhlcvBar;

use super::{mean, same_len, sample_std, EvalError};

/// Identifies the run a report belongs to.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportMetadata {
    pub ticker: String,
    pub model: String,
    pub with_sentiment: bool,
    pub seed: u64,
    pub config_hash: String,
}

/// Regression metrics for one run, in the units of the inputs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub mae: f64,
    pub mse: f64,
    pub r2: f64,
    pub adjusted_r2: f64,
    /// `100 · (1 − MAPE)` over the points with non-zero actuals.
    pub accuracy_pct: f64,
    pub n: usize,
    pub k: usize,
    /// `actual − predicted`, in input order.
    pub residuals: Vec<f64>,
    pub metadata: ReportMetadata,
}

impl MetricsReport {
    pub fn with_metadata(mut self, metadata: ReportMetadata) -> Self {
        self.metadata = metadata;
        self
    }
}

fn check_finite(xs: &[f64]) -> Result<(), EvalError> {
    if xs.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(EvalError::NonFinite)
    }
}

/// MAE, MSE, R², adjusted R² and MAPE-based accuracy with `k` predictors.
pub fn regression_metrics(actual: &[f64], predicted: &[f64], k: usize) -> Result<MetricsReport, EvalError> {
    same_len(actual.len(), predicted.len())?;
    check_finite(actual)?;
    check_finite(predicted)?;
    let n = actual.len();
    if n <= k + 1 {
        return Err(EvalError::DegreesOfFreedom { n, k });
    }
    let residuals: Vec<f64> = actual.iter().zip(predicted).map(|(y, p)| y - p).collect();
    let nf = n as f64;
    let mae = residuals.iter().map(|e| e.abs()).sum::<f64>() / nf;
    let ss_res: f64 = residuals.iter().map(|e| e * e).sum();
    let mse = ss_res / nf;

    let y_bar = mean(actual);
    let ss_tot: f64 = actual.iter().map(|y| (y - y_bar) * (y - y_bar)).sum();
    if ss_tot == 0.0 {
        return Err(EvalError::ConstantActual);
    }
    let r2 = 1.0 - ss_res / ss_tot;
    let adjusted_r2 = 1.0 - (1.0 - r2) * (nf - 1.0) / (nf - k as f64 - 1.0);

    let (ape_sum, ape_n) = actual
        .iter()
        .zip(&residuals)
        .filter(|(y, _)| **y != 0.0)
        .fold((0.0, 0usize), |(s, c), (y, e)| (s + (e / y).abs(), c + 1));
    let accuracy_pct = if ape_n == 0 {
        f64::NAN
    } else {
        100.0 * (1.0 - ape_sum / ape_n as f64)
    };

    Ok(MetricsReport {
        mae,
        mse,
        r2,
        adjusted_r2,
        accuracy_pct,
        n,
        k,
        residuals,
        metadata: ReportMetadata::default(),
    })
}

/// Sample Pearson correlation, clamped to [−1, 1].
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64, EvalError> {
    same_len(x.len(), y.len())?;
    if x.len() < 2 {
        return Err(EvalError::TooFew { needed: 2, actual: x.len() });
    }
    check_finite(x)?;
    check_finite(y)?;
    let (mx, my) = (mean(x), mean(y));
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(EvalError::UndefinedCorrelation("x"));
    }
    if syy == 0.0 {
        return Err(EvalError::UndefinedCorrelation("y"));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RiskReturn {
    pub expected_return: f64,
    pub risk: f64,
    pub n_returns: usize,
}

/// Simple returns `p_t / p_{t−1} − 1`.
pub fn returns(prices: &[f64]) -> Vec<f64> {
    prices.windows(2).map(|w| w[1] / w[0] - 1.0).collect()
}

/// Mean and sample standard deviation of daily simple returns on adjusted
/// close, in date order.
pub fn risk_return(bars: &[OhlcvBar]) -> Result<RiskReturn, EvalError> {
    if bars.len() < 3 {
        return Err(EvalError::TooFew { needed: 3, actual: bars.len() });
    }
    if let Some(b) = bars.iter().find(|b| b.ticker != bars[0].ticker) {
        return Err(EvalError::Degenerate(format!(
            "mixed tickers {} and {}",
            bars[0].ticker, b.ticker
        )));
    }
    let mut sorted: Vec<&OhlcvBar> = bars.iter().collect();
    sorted.sort_by_key(|b| b.date);
    let prices: Vec<f64> = sorted.iter().map(|b| b.adj_close).collect();
    check_finite(&prices)?;
    if prices.iter().any(|p| *p <= 0.0) {
        return Err(EvalError::Degenerate("non-positive price".into()));
    }
    let r = returns(&prices);
    Ok(RiskReturn {
        expected_return: mean(&r),
        risk: sample_std(&r),
        n_returns: r.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::NaiveDate;

    #[test]
    fn perfect_prediction() {
        let y = [3.0, 1.0, 4.0, 1.5];
        let m = regression_metrics(&y, &y, 1).unwrap();
        assert_eq!((m.mae, m.mse, m.adjusted_r2, m.accuracy_pct), (0.0, 0.0, 1.0, 100.0));
        assert_eq!(m.residuals, vec![0.0; 4]);
    }

    #[test]
    fn mean_prediction_adjusted() {
        let y: Vec<f64> = (1..=10).map(f64::from).collect();
        let m = regression_metrics(&y, &[5.5; 10], 1).unwrap();
        assert!(m.r2.abs() < 1e-15);
        assert!((m.adjusted_r2 + 0.125).abs() < 1e-15);
    }

    #[test]
    fn small_arithmetic() {
        let m = regression_metrics(&[1.0, 2.0, 3.0], &[2.0, 2.0, 2.0], 0).unwrap();
        assert!((m.mae - 2.0 / 3.0).abs() < 1e-15);
        assert!((m.mse - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(m.residuals, vec![-1.0, 0.0, 1.0]);
    }

    #[test]
    fn regression_errors() {
        assert_eq!(
            regression_metrics(&[1.0, 2.0], &[1.0, 2.0], 1),
            Err(EvalError::DegreesOfFreedom { n: 2, k: 1 })
        );
        assert_eq!(regression_metrics(&[2.0; 4], &[1.0; 4], 1), Err(EvalError::ConstantActual));
        assert!(regression_metrics(&[1.0, 2.0, 3.0], &[1.0], 0).is_err());
        assert_eq!(regression_metrics(&[1.0, f64::NAN, 3.0], &[1.0; 3], 0), Err(EvalError::NonFinite));
    }

    #[test]
    fn accuracy_skips_zero_actuals() {
        let m = regression_metrics(&[0.0, 2.0, 4.0], &[0.0, 1.0, 4.0], 0).unwrap();
        assert!((m.accuracy_pct - 75.0).abs() < 1e-12);
    }

    #[test]
    fn pearson_examples() {
        let x = [1.0, 2.0, 3.0, 4.0];
        assert!((pearson(&x, &x).unwrap() - 1.0).abs() < 1e-15);
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        assert!((pearson(&x, &neg).unwrap() + 1.0).abs() < 1e-15);
        assert!((pearson(&x, &[2.0, 1.0, 4.0, 3.0]).unwrap() - 0.6).abs() < 1e-15);
        assert_eq!(pearson(&x, &[1.0; 4]), Err(EvalError::UndefinedCorrelation("y")));
        assert!(pearson(&[1.0], &[1.0]).is_err());
    }

    fn bars(prices: &[f64]) -> Vec<OhlcvBar> {
        let d0 = NaiveDate::from_ymd_opt(2022, 1, 3).unwrap();
        prices
            .iter()
            .enumerate()
            .map(|(i, &p)| OhlcvBar {
                date: d0 + chrono::Days::new(i as u64),
                open: p,
                high: p,
                low: p,
                close: p,
                adj_close: p,
                volume: 1,
                ticker: "X".into(),
            })
            .collect()
    }

    #[test]
    fn risk_return_examples() {
        let flat = risk_return(&bars(&[5.0; 4])).unwrap();
        assert_eq!((flat.expected_return, flat.risk), (0.0, 0.0));

        let rr = risk_return(&bars(&[100.0, 110.0, 99.0])).unwrap();
        assert!(rr.expected_return.abs() < 1e-12);
        assert!((rr.risk - 0.1 * 2f64.sqrt()).abs() < 1e-12);

        let mut shuffled = bars(&[100.0, 110.0, 99.0]);
        shuffled.swap(0, 2);
        assert_eq!(risk_return(&shuffled).unwrap(), rr);

        assert!(risk_return(&bars(&[1.0, 2.0])).is_err());
    }
}
