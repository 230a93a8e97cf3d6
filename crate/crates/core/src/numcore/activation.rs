//! Scalar activations and their derivatives.
//!
//! The `*_grad_from_output` variants take the activation value rather than the
//! pre-activation, which is what backward passes have cached.

/// Logistic sigmoid, evaluated so that neither branch overflows.
#[inline]
pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

#[inline]
pub fn sigmoid_derivative(x: f64) -> f64 {
    let s = sigmoid(x);
    s * (1.0 - s)
}

#[inline]
pub fn sigmoid_grad_from_output(s: f64) -> f64 {
    s * (1.0 - s)
}

#[inline]
pub fn tanh(x: f64) -> f64 {
    x.tanh()
}

#[inline]
pub fn tanh_derivative(x: f64) -> f64 {
    let t = x.tanh();
    1.0 - t * t
}

#[inline]
pub fn tanh_grad_from_output(t: f64) -> f64 {
    1.0 - t * t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::SeededRng;
    use rand::Rng;

    #[test]
    fn fixed_points() {
        assert_eq!(sigmoid(0.0), 0.5);
        assert_eq!(tanh(0.0), 0.0);
        assert!((sigmoid(-1.7) - (1.0 - sigmoid(1.7))).abs() < 1e-15);
    }

    #[test]
    fn saturates_without_nan() {
        for x in [-1e6, -800.0, -40.0, 40.0, 800.0, 1e6] {
            let s = sigmoid(x);
            assert!(s.is_finite() && (0.0..=1.0).contains(&s));
            assert!(tanh(x).is_finite());
            assert!(sigmoid_derivative(x).is_finite());
        }
    }

    #[test]
    fn derivatives_match_central_differences() {
        let mut rng = SeededRng::new(42);
        let h = 1e-6;
        for _ in 0..100 {
            let x: f64 = rng.random_range(-4.0..4.0);
            let fd_s = (sigmoid(x + h) - sigmoid(x - h)) / (2.0 * h);
            let fd_t = (tanh(x + h) - tanh(x - h)) / (2.0 * h);
            let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(b.abs());
            assert!(rel(sigmoid_derivative(x), fd_s) < 1e-6, "sigmoid at {x}");
            assert!(rel(tanh_derivative(x), fd_t) < 1e-6, "tanh at {x}");
            assert_eq!(sigmoid_grad_from_output(sigmoid(x)), sigmoid_derivative(x));
        }
    }
}
