use crate::numcore::{glorot_init, sigmoid, sigmoid_grad_from_output, Matrix, SeededRng};

use super::ModelError;

/// Gated recurrent unit over the concatenated input `[h_{t-1}, x_t]`.
///
/// ```text
/// r  = σ(W_r·[h_prev, x] + b_r)
/// u  = σ(W_u·[h_prev, x] + b_u)
/// h̃ = tanh(W_h·[r ⊙ h_prev, x] + b_h)
/// h  = (1 − u) ⊙ h_prev + u ⊙ h̃
/// ```
///
/// Every weight matrix is `hidden × (hidden + input)`; biases are `hidden × 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct GruCell {
    pub input_dim: usize,
    pub hidden_dim: usize,
    pub w_r: Matrix,
    pub w_u: Matrix,
    pub w_h: Matrix,
    pub b_r: Matrix,
    pub b_u: Matrix,
    pub b_h: Matrix,
}

/// Values kept from one forward step for the backward pass.
#[derive(Clone, Debug)]
pub struct GruStepCache {
    pub h_prev: Vec<f64>,
    /// `[h_prev, x]`
    pub concat: Vec<f64>,
    /// `[r ⊙ h_prev, x]`
    pub concat_reset: Vec<f64>,
    pub r: Vec<f64>,
    pub u: Vec<f64>,
    pub candidate: Vec<f64>,
}

impl GruCell {
    pub const PARAM_NAMES: [&'static str; 6] = ["w_r", "w_u", "w_h", "b_r", "b_u", "b_h"];

    pub fn zeros(input_dim: usize, hidden_dim: usize) -> Self {
        let cols = hidden_dim + input_dim;
        Self {
            input_dim,
            hidden_dim,
            w_r: Matrix::zeros(hidden_dim, cols),
            w_u: Matrix::zeros(hidden_dim, cols),
            w_h: Matrix::zeros(hidden_dim, cols),
            b_r: Matrix::zeros(hidden_dim, 1),
            b_u: Matrix::zeros(hidden_dim, 1),
            b_h: Matrix::zeros(hidden_dim, 1),
        }
    }

    /// Glorot-uniform weights, zero biases.
    pub fn new(input_dim: usize, hidden_dim: usize, rng: &mut SeededRng) -> Self {
        let cols = hidden_dim + input_dim;
        let mut cell = Self::zeros(input_dim, hidden_dim);
        cell.w_r = glorot_init(hidden_dim, cols, rng);
        cell.w_u = glorot_init(hidden_dim, cols, rng);
        cell.w_h = glorot_init(hidden_dim, cols, rng);
        cell
    }

    pub fn params(&self) -> Vec<&Matrix> {
        vec![&self.w_r, &self.w_u, &self.w_h, &self.b_r, &self.b_u, &self.b_h]
    }

    pub fn params_mut(&mut self) -> Vec<&mut Matrix> {
        vec![
            &mut self.w_r,
            &mut self.w_u,
            &mut self.w_h,
            &mut self.b_r,
            &mut self.b_u,
            &mut self.b_h,
        ]
    }

    pub fn param_shapes(&self) -> Vec<(usize, usize)> {
        self.params().iter().map(|m| m.shape()).collect()
    }

    pub fn step(&self, x: &[f64], h_prev: &[f64]) -> Result<(Vec<f64>, GruStepCache), ModelError> {
        let h = self.hidden_dim;
        if x.len() != self.input_dim {
            return Err(ModelError::dims("gru_step input", self.input_dim, x.len()));
        }
        if h_prev.len() != h {
            return Err(ModelError::dims("gru_step hidden state", h, h_prev.len()));
        }

        let mut concat = Vec::with_capacity(h + self.input_dim);
        concat.extend_from_slice(h_prev);
        concat.extend_from_slice(x);

        let mut r = vec![0.0; h];
        let mut u = vec![0.0; h];
        self.w_r.matvec_into(&concat, &mut r);
        self.w_u.matvec_into(&concat, &mut u);
        for j in 0..h {
            r[j] = sigmoid(r[j] + self.b_r.as_slice()[j]);
            u[j] = sigmoid(u[j] + self.b_u.as_slice()[j]);
        }

        let mut concat_reset = concat.clone();
        for j in 0..h {
            concat_reset[j] = r[j] * h_prev[j];
        }
        let mut candidate = vec![0.0; h];
        self.w_h.matvec_into(&concat_reset, &mut candidate);
        for j in 0..h {
            candidate[j] = (candidate[j] + self.b_h.as_slice()[j]).tanh();
        }

        let h_new: Vec<f64> = (0..h)
            .map(|j| (1.0 - u[j]) * h_prev[j] + u[j] * candidate[j])
            .collect();

        Ok((
            h_new,
            GruStepCache {
                h_prev: h_prev.to_vec(),
                concat,
                concat_reset,
                r,
                u,
                candidate,
            },
        ))
    }

    /// Backpropagates `dh` (gradient w.r.t. this step's output) through one step.
    ///
    /// Parameter gradients are accumulated into `grads` (ordered as
    /// [`Self::params`]). Returns `(d h_prev, d x)`.
    pub fn step_backward(
        &self,
        cache: &GruStepCache,
        dh: &[f64],
        grads: &mut [Matrix],
    ) -> (Vec<f64>, Vec<f64>) {
        let h = self.hidden_dim;
        let mut dh_prev: Vec<f64> = (0..h).map(|j| dh[j] * (1.0 - cache.u[j])).collect();

        // candidate branch
        let da_h: Vec<f64> = (0..h)
            .map(|j| dh[j] * cache.u[j] * (1.0 - cache.candidate[j] * cache.candidate[j]))
            .collect();
        grads[2].add_outer(&da_h, &cache.concat_reset);
        grads[5].add_slice(&da_h);
        let mut d_concat_reset = vec![0.0; h + self.input_dim];
        self.w_h.matvec_transposed_acc(&da_h, &mut d_concat_reset);

        let mut d_concat = vec![0.0; h + self.input_dim];
        d_concat[h..].copy_from_slice(&d_concat_reset[h..]);

        // reset gate
        let da_r: Vec<f64> = (0..h)
            .map(|j| d_concat_reset[j] * cache.h_prev[j] * sigmoid_grad_from_output(cache.r[j]))
            .collect();
        for j in 0..h {
            dh_prev[j] += d_concat_reset[j] * cache.r[j];
        }

        // update gate
        let da_u: Vec<f64> = (0..h)
            .map(|j| dh[j] * (cache.candidate[j] - cache.h_prev[j]) * sigmoid_grad_from_output(cache.u[j]))
            .collect();

        grads[0].add_outer(&da_r, &cache.concat);
        grads[3].add_slice(&da_r);
        grads[1].add_outer(&da_u, &cache.concat);
        grads[4].add_slice(&da_u);
        self.w_r.matvec_transposed_acc(&da_r, &mut d_concat);
        self.w_u.matvec_transposed_acc(&da_u, &mut d_concat);

        for j in 0..h {
            dh_prev[j] += d_concat[j];
        }
        (dh_prev, d_concat[h..].to_vec())
    }
}
