//! Small dense linear-algebra kernel, activations, seeded randomness and the
//! Adam optimizer. Everything is `f64`.

mod activation;
mod adam;
mod matrix;
mod rng;

use thiserror::Error;

pub use activation::{
    sigmoid, sigmoid_derivative, sigmoid_grad_from_output, tanh, tanh_derivative,
    tanh_grad_from_output,
};
pub use adam::{AdamState, DEFAULT_BETA1, DEFAULT_BETA2, DEFAULT_EPSILON};
pub use matrix::{dot, Matrix};
pub use rng::SeededRng;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumError {
    #[error("{op}: shape mismatch {}x{} vs {}x{}", left.0, left.1, right.0, right.1)]
    Shape {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("length mismatch: expected {expected}, got {actual}")]
    Length { expected: usize, actual: usize },
    #[error("{op}: non-finite value in input")]
    NonFinite { op: &'static str },
}

/// Glorot/Xavier uniform initialization: entries drawn from `U(-a, a)` with
/// `a = sqrt(6 / (rows + cols))`.
pub fn glorot_init(rows: usize, cols: usize, rng: &mut SeededRng) -> Matrix {
    let bound = glorot_bound(rows, cols);
    let data = (0..rows * cols)
        .map(|_| (2.0 * rng.uniform() - 1.0) * bound)
        .collect();
    Matrix::from_vec(rows, cols, data).expect("length matches by construction")
}

pub fn glorot_bound(rows: usize, cols: usize) -> f64 {
    (6.0 / (rows + cols) as f64).sqrt()
}
