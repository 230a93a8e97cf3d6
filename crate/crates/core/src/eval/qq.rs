use serde::{Deserialize, Serialize};

use super::{mean, sample_std, EvalError};

const A: [f64; 6] = [
    -3.969683028665376e+01,
    2.209460984245205e+02,
    -2.759285104469687e+02,
    1.383577518672690e+02,
    -3.066479806614716e+01,
    2.506628277459239e+00,
];
const B: [f64; 5] = [
    -5.447609879822406e+01,
    1.615858368580409e+02,
    -1.556989798598866e+02,
    6.680131188771972e+01,
    -1.328068155288572e+01,
];
const C: [f64; 6] = [
    -7.784894002430293e-03,
    -3.223964580411365e-01,
    -2.400758277161838e+00,
    -2.549732539343734e+00,
    4.374664141464968e+00,
    2.938163982698783e+00,
];
const D: [f64; 4] = [
    7.784695709041462e-03,
    3.224671290700398e-01,
    2.445134137142996e+00,
    3.754408661907416e+00,
];
const P_LOW: f64 = 0.02425;

/// Standard normal quantile Φ⁻¹(p) by Acklam's rational approximation
/// (relative error below 1.2e−9). Returns ±∞ at 0 and 1, NaN outside.
pub fn inverse_normal_cdf(p: f64) -> f64 {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return f64::NAN;
    }
    if p == 0.0 {
        return f64::NEG_INFINITY;
    }
    if p == 1.0 {
        return f64::INFINITY;
    }
    let tail = |q: f64| {
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };
    if p < P_LOW {
        tail((-2.0 * p.ln()).sqrt())
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        -tail((-2.0 * (1.0 - p).ln()).sqrt())
    }
}

/// Sorted standardized residuals paired with normal plotting positions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QqSeries {
    pub theoretical: Vec<f64>,
    pub sample: Vec<f64>,
}

impl QqSeries {
    pub fn len(&self) -> usize {
        self.theoretical.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theoretical.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.theoretical.iter().copied().zip(self.sample.iter().copied())
    }

    /// Least-squares slope of sample on theoretical quantiles.
    pub fn slope(&self) -> f64 {
        let (mx, my) = (mean(&self.theoretical), mean(&self.sample));
        let (mut sxy, mut sxx) = (0.0, 0.0);
        for (x, y) in self.points() {
            sxy += (x - mx) * (y - my);
            sxx += (x - mx) * (x - mx);
        }
        sxy / sxx
    }

    /// Two-column CSV: `theoretical,sample`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("theoretical,sample\n");
        for (x, y) in self.points() {
            out.push_str(&format!("{x:?},{y:?}\n"));
        }
        out
    }
}

/// Standardizes with the sample mean and standard deviation, sorts, and
/// pairs the i-th value with Φ⁻¹((i − 0.5)/n).
pub fn qq_points(residuals: &[f64]) -> Result<QqSeries, EvalError> {
    let n = residuals.len();
    if n < 2 {
        return Err(EvalError::TooFew { needed: 2, actual: n });
    }
    if residuals.iter().any(|r| !r.is_finite()) {
        return Err(EvalError::NonFinite);
    }
    let sd = sample_std(residuals);
    if sd == 0.0 {
        return Err(EvalError::Degenerate("residuals are constant".into()));
    }
    let m = mean(residuals);
    let mut sample: Vec<f64> = residuals.iter().map(|r| (r - m) / sd).collect();
    sample.sort_by(f64::total_cmp);
    let theoretical = (1..=n)
        .map(|i| inverse_normal_cdf((i as f64 - 0.5) / n as f64))
        .collect();
    Ok(QqSeries { theoretical, sample })
}
