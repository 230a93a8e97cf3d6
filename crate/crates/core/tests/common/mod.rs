//! Oracles shared by the integration and acceptance suites. Nothing in here
//! calls into the code path it checks except through the public forward pass.
#![allow(dead_code)]

use gru_vader_core::models::Network;
use gru_vader_core::numcore::SeededRng;

pub const FD_STEP: f64 = 1e-6;
pub const GRAD_REL_TOL: f64 = 1e-5;
/// Denominator floor for the relative error, so entries whose true gradient
/// is below the central-difference round-off level (~1e-11 absolute at
/// h = 1e-6) are compared against an absolute 1e-10 instead.
pub const GRAD_REL_FLOOR: f64 = 1e-5;

fn loss(net: &Network, window: &[Vec<f64>], target: f64, dropout_seed: Option<u64>) -> f64 {
    let mut rng = dropout_seed.map(SeededRng::new);
    let (pred, _) = net.forward(window, rng.as_mut()).unwrap();
    0.5 * (pred - target).powi(2)
}

pub struct GradCheck {
    pub max_rel_error: f64,
    pub worst_param: String,
    pub checked: usize,
}

/// Compares analytic gradients of `½(ŷ − y)²` against central differences
/// over every parameter entry. With `dropout_seed` the forward passes run in
/// training mode with an identical mask each time.
pub fn check_gradients(net: &mut Network, window: &[Vec<f64>], target: f64, dropout_seed: Option<u64>) -> GradCheck {
    let mut rng = dropout_seed.map(SeededRng::new);
    let (pred, cache) = net.forward(window, rng.as_mut()).unwrap();
    let analytic = net.backward(&cache, pred - target).unwrap();
    let names = net.param_names();

    let mut result = GradCheck { max_rel_error: 0.0, worst_param: String::new(), checked: 0 };
    for (p_idx, grad) in analytic.iter().enumerate() {
        for e in 0..grad.len() {
            let original = net.params()[p_idx].as_slice()[e];
            net.params_mut()[p_idx].as_mut_slice()[e] = original + FD_STEP;
            let up = loss(net, window, target, dropout_seed);
            net.params_mut()[p_idx].as_mut_slice()[e] = original - FD_STEP;
            let down = loss(net, window, target, dropout_seed);
            net.params_mut()[p_idx].as_mut_slice()[e] = original;

            let numeric = (up - down) / (2.0 * FD_STEP);
            let a = grad.as_slice()[e];
            let rel = (a - numeric).abs() / a.abs().max(numeric.abs()).max(GRAD_REL_FLOOR);
            result.checked += 1;
            if rel > result.max_rel_error {
                result.max_rel_error = rel;
                result.worst_param = format!("{}[{e}] analytic={a:e} numeric={numeric:e}", names[p_idx]);
            }
        }
    }
    result
}

pub fn random_window(rng: &mut SeededRng, lookback: usize, features: usize) -> Vec<Vec<f64>> {
    (0..lookback)
        .map(|_| (0..features).map(|_| 2.0 * rng.uniform() - 1.0).collect())
        .collect()
}
