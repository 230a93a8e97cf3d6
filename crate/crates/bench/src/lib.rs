//! Input builders shared by the benchmarks.

use gru_vader_core::numcore::SeededRng;

/// `len` rows of `dim` uniform features in [0, 1).
pub fn random_window(len: usize, dim: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = SeededRng::new(seed);
    (0..len).map(|_| (0..dim).map(|_| rng.uniform()).collect()).collect()
}

/// A positive AR(1)-flavoured price path.
pub fn price_path(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = SeededRng::new(seed);
    let mut p = 100.0;
    let mut drift = 0.0;
    (0..n)
        .map(|_| {
            drift = 0.6 * drift + (rng.uniform() - 0.5);
            p += drift;
            p
        })
        .collect()
}

pub const TWEETS: [&str; 6] = [
    "$TSLA is absolutely CRUSHING it today!!! :)",
    "Not a great quarter, but not terrible either.",
    "Deliveries beat estimates; the stock barely moved.",
    "I really hate how this company treats shareholders",
    "Mainstream media has done an amazing job at burying the good news",
    "no opinion, just watching the tape",
];
