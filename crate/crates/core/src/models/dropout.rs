use crate::numcore::SeededRng;

use super::ModelError;

/// Inverted dropout.
///
/// With an RNG (training) each entry is zeroed with probability `rate` and
/// survivors are scaled by `1/(1-rate)`; without one (inference) the input is
/// returned unchanged. Returns the output and the per-entry multiplier.
pub fn dropout(
    x: &[f64],
    rate: f64,
    rng: Option<&mut SeededRng>,
) -> Result<(Vec<f64>, Vec<f64>), ModelError> {
    if !(0.0..1.0).contains(&rate) {
        return Err(ModelError::Config(format!(
            "dropout rate must lie in [0, 1), got {rate}"
        )));
    }
    let mask = match rng {
        Some(rng) if rate > 0.0 => {
            let keep = 1.0 / (1.0 - rate);
            x.iter()
                .map(|_| if rng.uniform() < rate { 0.0 } else { keep })
                .collect()
        }
        _ => vec![1.0; x.len()],
    };
    let out = x.iter().zip(&mask).map(|(v, m)| v * m).collect();
    Ok((out, mask))
}
