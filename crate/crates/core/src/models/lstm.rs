use crate::numcore::{glorot_init, sigmoid, sigmoid_grad_from_output, Matrix, SeededRng};

use super::ModelError;

/// Standard LSTM cell over `z = [h_{t-1}, x_t]`:
///
/// ```text
/// i = σ(W_i z + b_i)    f = σ(W_f z + b_f)    o = σ(W_o z + b_o)
/// g = tanh(W_g z + b_g)
/// c = f ⊙ c_prev + i ⊙ g
/// h = o ⊙ tanh(c)
/// ```
#[derive(Clone, Debug, PartialEq)]
pub struct LstmCell {
    pub input_dim: usize,
    pub hidden_dim: usize,
    pub w_i: Matrix,
    pub w_f: Matrix,
    pub w_o: Matrix,
    pub w_g: Matrix,
    pub b_i: Matrix,
    pub b_f: Matrix,
    pub b_o: Matrix,
    pub b_g: Matrix,
}

#[derive(Clone, Debug)]
pub struct LstmStepCache {
    pub c_prev: Vec<f64>,
    pub concat: Vec<f64>,
    pub i: Vec<f64>,
    pub f: Vec<f64>,
    pub o: Vec<f64>,
    pub g: Vec<f64>,
    pub c: Vec<f64>,
    pub tanh_c: Vec<f64>,
}

impl LstmCell {
    pub const PARAM_NAMES: [&'static str; 8] =
        ["w_i", "w_f", "w_o", "w_g", "b_i", "b_f", "b_o", "b_g"];

    pub fn zeros(input_dim: usize, hidden_dim: usize) -> Self {
        let cols = hidden_dim + input_dim;
        Self {
            input_dim,
            hidden_dim,
            w_i: Matrix::zeros(hidden_dim, cols),
            w_f: Matrix::zeros(hidden_dim, cols),
            w_o: Matrix::zeros(hidden_dim, cols),
            w_g: Matrix::zeros(hidden_dim, cols),
            b_i: Matrix::zeros(hidden_dim, 1),
            b_f: Matrix::zeros(hidden_dim, 1),
            b_o: Matrix::zeros(hidden_dim, 1),
            b_g: Matrix::zeros(hidden_dim, 1),
        }
    }

    /// Glorot-uniform weights, zero biases except the forget gate (+1).
    pub fn new(input_dim: usize, hidden_dim: usize, rng: &mut SeededRng) -> Self {
        let cols = hidden_dim + input_dim;
        let mut cell = Self::zeros(input_dim, hidden_dim);
        cell.w_i = glorot_init(hidden_dim, cols, rng);
        cell.w_f = glorot_init(hidden_dim, cols, rng);
        cell.w_o = glorot_init(hidden_dim, cols, rng);
        cell.w_g = glorot_init(hidden_dim, cols, rng);
        cell.b_f.fill(1.0);
        cell
    }

    pub fn params(&self) -> Vec<&Matrix> {
        vec![
            &self.w_i, &self.w_f, &self.w_o, &self.w_g, &self.b_i, &self.b_f, &self.b_o, &self.b_g,
        ]
    }

    pub fn params_mut(&mut self) -> Vec<&mut Matrix> {
        vec![
            &mut self.w_i,
            &mut self.w_f,
            &mut self.w_o,
            &mut self.w_g,
            &mut self.b_i,
            &mut self.b_f,
            &mut self.b_o,
            &mut self.b_g,
        ]
    }

    pub fn step(
        &self,
        x: &[f64],
        h_prev: &[f64],
        c_prev: &[f64],
    ) -> Result<(Vec<f64>, Vec<f64>, LstmStepCache), ModelError> {
        let h = self.hidden_dim;
        if x.len() != self.input_dim {
            return Err(ModelError::dims("lstm_step input", self.input_dim, x.len()));
        }
        if h_prev.len() != h || c_prev.len() != h {
            return Err(ModelError::dims(
                "lstm_step state",
                h,
                if h_prev.len() != h { h_prev.len() } else { c_prev.len() },
            ));
        }
        let mut concat = Vec::with_capacity(h + self.input_dim);
        concat.extend_from_slice(h_prev);
        concat.extend_from_slice(x);

        let gate = |w: &Matrix, b: &Matrix, act: fn(f64) -> f64| {
            let mut a = vec![0.0; h];
            w.matvec_into(&concat, &mut a);
            a.iter_mut()
                .zip(b.as_slice())
                .for_each(|(v, bias)| *v = act(*v + bias));
            a
        };
        let i = gate(&self.w_i, &self.b_i, sigmoid);
        let f = gate(&self.w_f, &self.b_f, sigmoid);
        let o = gate(&self.w_o, &self.b_o, sigmoid);
        let g = gate(&self.w_g, &self.b_g, f64::tanh);

        let c: Vec<f64> = (0..h).map(|j| f[j] * c_prev[j] + i[j] * g[j]).collect();
        let tanh_c: Vec<f64> = c.iter().map(|v| v.tanh()).collect();
        let h_new: Vec<f64> = (0..h).map(|j| o[j] * tanh_c[j]).collect();

        Ok((
            h_new,
            c.clone(),
            LstmStepCache {
                c_prev: c_prev.to_vec(),
                concat,
                i,
                f,
                o,
                g,
                c,
                tanh_c,
            },
        ))
    }

    /// Backpropagates through one step given gradients w.r.t. this step's `h`
    /// and `c`. Accumulates parameter gradients and returns
    /// `(d h_prev, d c_prev, d x)`.
    pub fn step_backward(
        &self,
        cache: &LstmStepCache,
        dh: &[f64],
        dc: &[f64],
        grads: &mut [Matrix],
    ) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        let h = self.hidden_dim;
        let mut da_i = vec![0.0; h];
        let mut da_f = vec![0.0; h];
        let mut da_o = vec![0.0; h];
        let mut da_g = vec![0.0; h];
        let mut dc_prev = vec![0.0; h];
        for j in 0..h {
            let dc_total = dc[j] + dh[j] * cache.o[j] * (1.0 - cache.tanh_c[j] * cache.tanh_c[j]);
            da_o[j] = dh[j] * cache.tanh_c[j] * sigmoid_grad_from_output(cache.o[j]);
            da_f[j] = dc_total * cache.c_prev[j] * sigmoid_grad_from_output(cache.f[j]);
            da_i[j] = dc_total * cache.g[j] * sigmoid_grad_from_output(cache.i[j]);
            da_g[j] = dc_total * cache.i[j] * (1.0 - cache.g[j] * cache.g[j]);
            dc_prev[j] = dc_total * cache.f[j];
        }

        let mut d_concat = vec![0.0; h + self.input_dim];
        let weights = [&self.w_i, &self.w_f, &self.w_o, &self.w_g];
        for (k, da) in [&da_i, &da_f, &da_o, &da_g].into_iter().enumerate() {
            grads[k].add_outer(da, &cache.concat);
            grads[k + 4].add_slice(da);
            weights[k].matvec_transposed_acc(da, &mut d_concat);
        }
        let dx = d_concat.split_off(h);
        (d_concat, dc_prev, dx)
    }
}
