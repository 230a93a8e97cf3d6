use serde::{Deserialize, Serialize};

use super::difference::difference;
use super::nelder_mead::{nelder_mead, NelderMeadOptions};
use super::{ArimaOrder, BaselineError};

/// ARIMA baseline settings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ArimaConfig {
    pub p: usize,
    pub d: usize,
    pub q: usize,
    /// `None` fits an intercept only when `d == 0`.
    pub intercept: Option<bool>,
    /// Walk-forward refit interval in steps.
    pub refit_every: usize,
    /// Regress on the previous day's sentiment.
    pub exog_sentiment: bool,
}

impl Default for ArimaConfig {
    fn default() -> Self {
        Self {
            p: 5,
            d: 1,
            q: 0,
            intercept: None,
            refit_every: 10,
            exog_sentiment: false,
        }
    }
}

impl ArimaConfig {
    pub fn order(&self) -> Result<ArimaOrder, BaselineError> {
        ArimaOrder::new(self.p, self.d, self.q)
    }

    pub fn with_order(order: ArimaOrder) -> Self {
        Self {
            p: order.p,
            d: order.d,
            q: order.q,
            ..Self::default()
        }
    }

    pub fn include_intercept(&self) -> bool {
        self.intercept.unwrap_or(self.d == 0)
    }
}

/// A fitted ARIMA model on the `d`-times differenced series `w`:
///
/// `w_t = c + β·s_{t−1} + Σ φ_i w_{t−i} + Σ θ_j e_{t−j} + e_t`
///
/// where `s` is the optional exogenous sentiment series (levels index).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArimaModel {
    pub order: ArimaOrder,
    pub phi: Vec<f64>,
    pub theta: Vec<f64>,
    pub intercept: f64,
    pub has_intercept: bool,
    pub exog_coef: Option<f64>,
    pub sigma2: f64,
    pub css: f64,
    /// Innovations in the CSS sum.
    pub n_terms: usize,
    pub iterations: usize,
    pub converged: bool,
    /// AR polynomial has all roots outside the unit circle.
    pub stationary: bool,
}

/// Stationarity of `1 − φ_1 z − … − φ_p z^p` by stepping the coefficients
/// down to partial autocorrelations, all of which must lie in (−1, 1).
pub fn is_stationary(phi: &[f64]) -> bool {
    let mut a = phi.to_vec();
    for k in (0..a.len()).rev() {
        let r = a[k];
        if !(r.abs() < 1.0) {
            return false;
        }
        let denom = 1.0 - r * r;
        let prev: Vec<f64> = (0..k).map(|j| (a[j] + r * a[k - 1 - j]) / denom).collect();
        a.truncate(k);
        a.copy_from_slice(&prev);
    }
    true
}

struct Layout {
    intercept: bool,
    exog: bool,
    p: usize,
    q: usize,
}

impl Layout {
    fn len(&self) -> usize {
        self.intercept as usize + self.exog as usize + self.p + self.q
    }

    fn unpack<'a>(&self, params: &'a [f64]) -> (f64, f64, &'a [f64], &'a [f64]) {
        let mut i = 0;
        let c = if self.intercept {
            i += 1;
            params[0]
        } else {
            0.0
        };
        let beta = if self.exog {
            i += 1;
            params[i - 1]
        } else {
            0.0
        };
        let phi = &params[i..i + self.p];
        let theta = &params[i + self.p..i + self.p + self.q];
        (c, beta, phi, theta)
    }
}

/// Differenced series plus the lagged regressor aligned with it.
struct Design {
    w: Vec<f64>,
    x: Option<Vec<f64>>,
    /// First index whose innovation enters the CSS.
    start: usize,
}

impl Design {
    fn new(series: &[f64], order: ArimaOrder, exog: Option<&[f64]>) -> Result<Self, BaselineError> {
        let w = difference(series, order.d)?;
        let x = match exog {
            Some(s) => {
                if s.len() < series.len() {
                    return Err(BaselineError::Input(format!(
                        "exogenous series has {} values, needs {}",
                        s.len(),
                        series.len()
                    )));
                }
                // regressor for w[i] (level i + d) is the previous level's value
                Some((0..w.len()).map(|i| if i + order.d >= 1 { s[i + order.d - 1] } else { 0.0 }).collect())
            }
            None => None,
        };
        let start = order.p.max(usize::from(exog.is_some() && order.d == 0));
        Ok(Self { w, x, start })
    }

    /// One-step prediction of `w[t]` given innovations before `t`.
    fn predict(&self, layout: &Layout, params: &[f64], e: &[f64], t: usize, x_t: f64) -> f64 {
        let (c, beta, phi, theta) = layout.unpack(params);
        let mut pred = c + beta * x_t;
        for (i, ph) in phi.iter().enumerate() {
            pred += ph * self.w[t - 1 - i];
        }
        for (j, th) in theta.iter().enumerate() {
            if t > j {
                pred += th * e[t - 1 - j];
            }
        }
        pred
    }

    /// Innovations over the whole series and their sum of squares from `start`.
    fn innovations(&self, layout: &Layout, params: &[f64]) -> (Vec<f64>, f64) {
        let n = self.w.len();
        let mut e = vec![0.0; n];
        let mut css = 0.0;
        for t in self.start..n {
            let x_t = self.x.as_ref().map_or(0.0, |x| x[t]);
            e[t] = self.w[t] - self.predict(layout, params, &e, t, x_t);
            css += e[t] * e[t];
        }
        (e, css)
    }
}

/// Conditional-sum-of-squares fit by Nelder–Mead from a zero start.
///
/// `exog`, when given, is aligned with `series` (same index = same day).
pub fn fit_css(
    series: &[f64],
    order: ArimaOrder,
    intercept: bool,
    exog: Option<&[f64]>,
) -> Result<ArimaModel, BaselineError> {
    fit_css_with(series, order, intercept, exog, &NelderMeadOptions::default())
}

pub(crate) fn fit_css_with(
    series: &[f64],
    order: ArimaOrder,
    intercept: bool,
    exog: Option<&[f64]>,
    options: &NelderMeadOptions,
) -> Result<ArimaModel, BaselineError> {
    order.validate()?;
    if let Some(bad) = series.iter().chain(exog.unwrap_or(&[])).find(|v| !v.is_finite()) {
        return Err(BaselineError::Input(format!("series contains {bad}")));
    }
    let layout = Layout {
        intercept,
        exog: exog.is_some(),
        p: order.p,
        q: order.q,
    };
    if layout.len() == 0 && order.d == 0 {
        return Err(BaselineError::Order(format!(
            "{order} without intercept has nothing to fit"
        )));
    }
    let design = Design::new(series, order, exog)?;
    let needed = 10 * (order.p + order.q + 1);
    if design.w.len() < needed {
        return Err(BaselineError::InsufficientData(format!(
            "ARIMA{order} needs {needed} differenced values, got {}",
            design.w.len()
        )));
    }

    let x0 = vec![0.0; layout.len()];
    let objective = |params: &[f64]| design.innovations(&layout, params).1;
    let mut result = nelder_mead(objective, &x0, options);
    // one restart from the optimum guards against a collapsed simplex
    if result.converged && !x0.is_empty() {
        let again = nelder_mead(objective, &result.x, options);
        if again.fx <= result.fx {
            let iterations = result.iterations + again.iterations;
            result = again;
            result.iterations = iterations;
        }
    }

    let (c, beta, phi, theta) = layout.unpack(&result.x);
    let n_terms = design.w.len() - design.start;
    let stationary = is_stationary(phi);
    if !stationary {
        log::warn!("ARIMA{order} fit has a non-stationary AR polynomial");
    }
    let model = ArimaModel {
        order,
        phi: phi.to_vec(),
        theta: theta.to_vec(),
        intercept: c,
        has_intercept: intercept,
        exog_coef: exog.map(|_| beta),
        sigma2: result.fx / n_terms as f64,
        css: result.fx,
        n_terms,
        iterations: result.iterations,
        converged: result.converged,
        stationary,
    };
    if !result.converged {
        return Err(BaselineError::NoConvergence {
            iterations: result.iterations,
            best_css: result.fx,
            best: Box::new(model),
        });
    }
    Ok(model)
}

impl ArimaModel {
    fn layout(&self) -> Layout {
        Layout {
            intercept: self.has_intercept,
            exog: self.exog_coef.is_some(),
            p: self.order.p,
            q: self.order.q,
        }
    }

    fn params(&self) -> Vec<f64> {
        let mut v = Vec::new();
        if self.has_intercept {
            v.push(self.intercept);
        }
        if let Some(b) = self.exog_coef {
            v.push(b);
        }
        v.extend_from_slice(&self.phi);
        v.extend_from_slice(&self.theta);
        v
    }

    /// Forecast of the value following `series`. With an exogenous model,
    /// `exog` must cover `series` (its last value is the regressor).
    pub fn forecast_next(&self, series: &[f64], exog: Option<&[f64]>) -> Result<f64, BaselineError> {
        if self.exog_coef.is_some() != exog.is_some() {
            return Err(BaselineError::Input("exogenous series does not match the fitted model".into()));
        }
        let d = self.order.d;
        if series.len() <= d + self.order.p {
            return Err(BaselineError::InsufficientData(format!(
                "forecasting ARIMA{} needs more than {} observations",
                self.order,
                d + self.order.p
            )));
        }
        let design = Design::new(series, self.order, exog)?;
        let layout = self.layout();
        let params = self.params();
        let (mut e, _) = design.innovations(&layout, &params);
        let t = design.w.len();
        e.push(0.0);
        let mut w_ext = design.w.clone();
        w_ext.push(0.0);
        let ext = Design {
            w: w_ext,
            x: None,
            start: design.start,
        };
        let x_t = exog.map_or(0.0, |s| s[series.len() - 1]);
        let w_hat = ext.predict(&layout, &params, &e, t, x_t);

        // undo the differencing: y_n = w_n − Σ_{k=1..d} (−1)^k C(d,k) y_{n−k}
        let n = series.len();
        let mut y_hat = w_hat;
        let mut binom = 1.0;
        for k in 1..=d {
            binom = binom * (d - k + 1) as f64 / k as f64;
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            y_hat += sign * binom * series[n - k];
        }
        Ok(y_hat)
    }
}

/// Walk-forward predictions aligned with the test values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WalkForecast {
    pub predictions: Vec<f64>,
    pub refits: usize,
    pub nonstationary_fits: usize,
    /// The last model fitted.
    pub model: ArimaModel,
}

/// One-step-ahead forecasts over `test`, revealing each true value after
/// forecasting it and refitting every `config.refit_every` steps.
///
/// `exog` (sentiment) must cover `history` followed by `test`.
pub fn forecast_walk(
    config: &ArimaConfig,
    history: &[f64],
    test: &[f64],
    exog: Option<&[f64]>,
) -> Result<WalkForecast, BaselineError> {
    let order = config.order()?;
    if config.refit_every == 0 {
        return Err(BaselineError::Input("refit_every must be at least 1".into()));
    }
    if let Some(s) = exog {
        if s.len() < history.len() + test.len() {
            return Err(BaselineError::Input("exogenous series is shorter than history + test".into()));
        }
    }
    if test.is_empty() {
        let model = fit_css(history, order, config.include_intercept(), exog.map(|s| &s[..history.len()]))?;
        return Ok(WalkForecast {
            predictions: Vec::new(),
            refits: 1,
            nonstationary_fits: usize::from(!model.stationary),
            model,
        });
    }
    let mut observed = history.to_vec();
    let mut predictions = Vec::with_capacity(test.len());
    let mut model: Option<ArimaModel> = None;
    let mut refits = 0;
    let mut nonstationary = 0;
    let wrap = |step: usize| move |e: BaselineError| BaselineError::Forecast { step, source: Box::new(e) };
    for (step, &actual) in test.iter().enumerate() {
        let ex = exog.map(|s| &s[..observed.len()]);
        if step % config.refit_every == 0 {
            let m = fit_css(&observed, order, config.include_intercept(), ex).map_err(wrap(step))?;
            refits += 1;
            nonstationary += usize::from(!m.stationary);
            model = Some(m);
        }
        let m = model.as_ref().expect("fitted at step 0");
        predictions.push(m.forecast_next(&observed, ex).map_err(wrap(step))?);
        observed.push(actual);
    }
    Ok(WalkForecast {
        predictions,
        refits,
        nonstationary_fits: nonstationary,
        model: model.expect("at least one fit"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baselines::persistence_walk;

    #[test]
    fn stationarity_examples() {
        assert!(is_stationary(&[]));
        assert!(is_stationary(&[0.7]));
        assert!(!is_stationary(&[1.2]));
        assert!(!is_stationary(&[-1.0]));
        assert!(is_stationary(&[0.5, 0.3]));
        // (1 − z)(1 − 0.5z) has a unit root
        assert!(!is_stationary(&[1.5, -0.5]));
    }

    #[test]
    fn random_walk_equals_persistence() {
        let history: Vec<f64> = (0..40).map(|i| 100.0 + (i as f64 * 0.7).sin() * 5.0).collect();
        let test: Vec<f64> = (40..70).map(|i| 100.0 + (i as f64 * 0.7).sin() * 5.0).collect();
        let cfg = ArimaConfig { p: 0, d: 1, q: 0, ..Default::default() };
        let walk = forecast_walk(&cfg, &history, &test, None).unwrap();
        assert_eq!(walk.predictions, persistence_walk(&history, &test).unwrap());
    }

    #[test]
    fn constant_series_gives_constant_forecasts() {
        let cfg = ArimaConfig { p: 1, d: 1, q: 0, ..Default::default() };
        let walk = forecast_walk(&cfg, &[4.0; 40], &[4.0; 12], None).unwrap();
        assert!(walk.predictions.iter().all(|&p| p == 4.0), "{:?}", walk.predictions);
    }

    #[test]
    fn intercept_only_is_the_mean() {
        let s: Vec<f64> = (0..50).map(|i| ((i * 37 % 11) as f64) - 3.0).collect();
        let m = fit_css(&s, ArimaOrder::new(0, 0, 0).unwrap(), true, None).unwrap();
        let mean = s.iter().sum::<f64>() / s.len() as f64;
        assert!((m.intercept - mean).abs() < 1e-6, "{} vs {mean}", m.intercept);
    }

    #[test]
    fn too_short_is_rejected() {
        let err = fit_css(&[1.0; 15], ArimaOrder::new(1, 1, 0).unwrap(), false, None).unwrap_err();
        assert!(matches!(err, BaselineError::InsufficientData(_)));
    }

    #[test]
    fn second_order_differencing_forecast() {
        // quadratic trend: second differences are constant 2, so ARIMA(0,2,0)
        // with an intercept of 2 extrapolates exactly
        let s: Vec<f64> = (0..30).map(|i| (i * i) as f64).collect();
        let m = fit_css(&s, ArimaOrder::new(0, 2, 0).unwrap(), true, None).unwrap();
        assert!((m.intercept - 2.0).abs() < 1e-6);
        assert!((m.forecast_next(&s, None).unwrap() - 900.0).abs() < 1e-5);
    }

    #[test]
    fn exog_regressor_is_lagged() {
        // w_t = 3·s_{t−1} exactly
        let sent: Vec<f64> = (0..80).map(|i| ((i * 7 % 13) as f64 / 13.0) - 0.5).collect();
        let mut y = vec![10.0];
        for t in 1..80 {
            y.push(y[t - 1] + 3.0 * sent[t - 1]);
        }
        let m = fit_css(&y, ArimaOrder::new(0, 1, 0).unwrap(), false, Some(&sent)).unwrap();
        assert!((m.exog_coef.unwrap() - 3.0).abs() < 1e-6);
        let next = m.forecast_next(&y, Some(&sent)).unwrap();
        assert!((next - (y[79] + 3.0 * sent[79])).abs() < 1e-5);
    }
}
