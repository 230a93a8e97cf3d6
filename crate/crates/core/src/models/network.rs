use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

use crate::numcore::{dot, glorot_init, Matrix, SeededRng};

use super::dropout::dropout;
use super::gru::{GruCell, GruStepCache};
use super::lstm::{LstmCell, LstmStepCache};
use super::ModelError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CellKind {
    Gru,
    Lstm,
}

impl fmt::Display for CellKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CellKind::Gru => "gru",
            CellKind::Lstm => "lstm",
        })
    }
}

impl FromStr for CellKind {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "gru" => Ok(CellKind::Gru),
            "lstm" => Ok(CellKind::Lstm),
            other => Err(ModelError::Config(format!("unknown cell kind {other:?}"))),
        }
    }
}

/// Architecture of a recurrent regressor:
/// `[recurrent layer] × layers → dropout → dense(1)`.
///
/// Every recurrent layer has `units` hidden units per direction. Dropout acts
/// on the final representation only (last hidden state, or the concatenation
/// of both directions' final states when bidirectional).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetworkSpec {
    pub cell: CellKind,
    pub layers: usize,
    pub bidirectional: bool,
    pub units: usize,
    pub dropout_rate: f64,
    pub input_dim: usize,
}

impl NetworkSpec {
    pub fn gru(units: usize, input_dim: usize) -> Self {
        Self {
            cell: CellKind::Gru,
            layers: 1,
            bidirectional: false,
            units,
            dropout_rate: 0.2,
            input_dim,
        }
    }

    pub fn lstm(units: usize, input_dim: usize) -> Self {
        Self {
            cell: CellKind::Lstm,
            ..Self::gru(units, input_dim)
        }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if !(1..=2).contains(&self.layers) {
            return Err(ModelError::Config(format!(
                "layers must be 1 or 2, got {}",
                self.layers
            )));
        }
        if self.units == 0 || self.input_dim == 0 {
            return Err(ModelError::Config("units and input_dim must be positive".into()));
        }
        if !(0.0..1.0).contains(&self.dropout_rate) {
            return Err(ModelError::Config(format!(
                "dropout rate must lie in [0, 1), got {}",
                self.dropout_rate
            )));
        }
        Ok(())
    }

    pub fn directions(&self) -> usize {
        if self.bidirectional {
            2
        } else {
            1
        }
    }

    /// Width of the representation fed to the dense head.
    pub fn head_width(&self) -> usize {
        self.units * self.directions()
    }
}

/// Either cell type behind one interface.
#[derive(Clone, Debug, PartialEq)]
pub enum RecurrentCell {
    Gru(GruCell),
    Lstm(LstmCell),
}

#[derive(Clone, Debug)]
pub enum SequenceCache {
    Gru(Vec<GruStepCache>),
    Lstm(Vec<LstmStepCache>),
}

impl SequenceCache {
    pub fn len(&self) -> usize {
        match self {
            SequenceCache::Gru(c) => c.len(),
            SequenceCache::Lstm(c) => c.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl RecurrentCell {
    pub fn new(kind: CellKind, input_dim: usize, hidden_dim: usize, rng: &mut SeededRng) -> Self {
        match kind {
            CellKind::Gru => RecurrentCell::Gru(GruCell::new(input_dim, hidden_dim, rng)),
            CellKind::Lstm => RecurrentCell::Lstm(LstmCell::new(input_dim, hidden_dim, rng)),
        }
    }

    pub fn kind(&self) -> CellKind {
        match self {
            RecurrentCell::Gru(_) => CellKind::Gru,
            RecurrentCell::Lstm(_) => CellKind::Lstm,
        }
    }

    pub fn input_dim(&self) -> usize {
        match self {
            RecurrentCell::Gru(c) => c.input_dim,
            RecurrentCell::Lstm(c) => c.input_dim,
        }
    }

    pub fn hidden_dim(&self) -> usize {
        match self {
            RecurrentCell::Gru(c) => c.hidden_dim,
            RecurrentCell::Lstm(c) => c.hidden_dim,
        }
    }

    pub fn param_names(&self) -> &'static [&'static str] {
        match self {
            RecurrentCell::Gru(_) => &GruCell::PARAM_NAMES,
            RecurrentCell::Lstm(_) => &LstmCell::PARAM_NAMES,
        }
    }

    pub fn params(&self) -> Vec<&Matrix> {
        match self {
            RecurrentCell::Gru(c) => c.params(),
            RecurrentCell::Lstm(c) => c.params(),
        }
    }

    pub fn params_mut(&mut self) -> Vec<&mut Matrix> {
        match self {
            RecurrentCell::Gru(c) => c.params_mut(),
            RecurrentCell::Lstm(c) => c.params_mut(),
        }
    }

    /// Runs the cell over `inputs` from a zero state and returns the hidden
    /// state after every step.
    pub fn forward_sequence(
        &self,
        inputs: &[Vec<f64>],
    ) -> Result<(Vec<Vec<f64>>, SequenceCache), ModelError> {
        let hidden = self.hidden_dim();
        let mut outputs = Vec::with_capacity(inputs.len());
        match self {
            RecurrentCell::Gru(cell) => {
                let mut caches = Vec::with_capacity(inputs.len());
                let mut h = vec![0.0; hidden];
                for x in inputs {
                    let (h_next, cache) = cell.step(x, &h)?;
                    caches.push(cache);
                    outputs.push(h_next.clone());
                    h = h_next;
                }
                Ok((outputs, SequenceCache::Gru(caches)))
            }
            RecurrentCell::Lstm(cell) => {
                let mut caches = Vec::with_capacity(inputs.len());
                let mut h = vec![0.0; hidden];
                let mut c = vec![0.0; hidden];
                for x in inputs {
                    let (h_next, c_next, cache) = cell.step(x, &h, &c)?;
                    caches.push(cache);
                    outputs.push(h_next.clone());
                    h = h_next;
                    c = c_next;
                }
                Ok((outputs, SequenceCache::Lstm(caches)))
            }
        }
    }

    /// Backpropagation through time. `d_outputs[t]` is the gradient flowing
    /// into the hidden state emitted at step `t` from outside the recurrence.
    /// Parameter gradients are accumulated into `grads`; the gradient w.r.t.
    /// each input is returned.
    pub fn backward_sequence(
        &self,
        cache: &SequenceCache,
        d_outputs: &[Vec<f64>],
        grads: &mut [Matrix],
    ) -> Result<Vec<Vec<f64>>, ModelError> {
        if cache.len() != d_outputs.len() {
            return Err(ModelError::StaleCache(format!(
                "cache holds {} steps, upstream gradient has {}",
                cache.len(),
                d_outputs.len()
            )));
        }
        let hidden = self.hidden_dim();
        let mut d_inputs = vec![Vec::new(); d_outputs.len()];
        match (self, cache) {
            (RecurrentCell::Gru(cell), SequenceCache::Gru(steps)) => {
                let mut dh_next = vec![0.0; hidden];
                for t in (0..steps.len()).rev() {
                    let dh: Vec<f64> = dh_next.iter().zip(&d_outputs[t]).map(|(a, b)| a + b).collect();
                    let (dh_prev, dx) = cell.step_backward(&steps[t], &dh, grads);
                    d_inputs[t] = dx;
                    dh_next = dh_prev;
                }
            }
            (RecurrentCell::Lstm(cell), SequenceCache::Lstm(steps)) => {
                let mut dh_next = vec![0.0; hidden];
                let mut dc_next = vec![0.0; hidden];
                for t in (0..steps.len()).rev() {
                    let dh: Vec<f64> = dh_next.iter().zip(&d_outputs[t]).map(|(a, b)| a + b).collect();
                    let (dh_prev, dc_prev, dx) = cell.step_backward(&steps[t], &dh, &dc_next, grads);
                    d_inputs[t] = dx;
                    dh_next = dh_prev;
                    dc_next = dc_prev;
                }
            }
            _ => {
                return Err(ModelError::StaleCache(
                    "cache cell type does not match the cell".into(),
                ))
            }
        }
        Ok(d_inputs)
    }
}

/// One recurrent layer, optionally bidirectional.
#[derive(Clone, Debug, PartialEq)]
pub struct RecurrentLayer {
    pub forward: RecurrentCell,
    pub backward: Option<RecurrentCell>,
}

#[derive(Clone, Debug)]
pub struct LayerCache {
    forward: SequenceCache,
    backward: Option<SequenceCache>,
}

impl RecurrentLayer {
    pub fn output_dim(&self) -> usize {
        self.forward.hidden_dim() * if self.backward.is_some() { 2 } else { 1 }
    }

    /// Returns per-step outputs aligned to input time. For a bidirectional
    /// layer, step `t` is `[fwd_t, bwd_t]` where `bwd_t` has seen inputs
    /// `t..T`.
    fn forward(&self, inputs: &[Vec<f64>]) -> Result<(Vec<Vec<f64>>, LayerCache), ModelError> {
        let (fwd_out, fwd_cache) = self.forward.forward_sequence(inputs)?;
        match &self.backward {
            None => Ok((
                fwd_out,
                LayerCache {
                    forward: fwd_cache,
                    backward: None,
                },
            )),
            Some(bwd) => {
                let reversed: Vec<Vec<f64>> = inputs.iter().rev().cloned().collect();
                let (bwd_out, bwd_cache) = bwd.forward_sequence(&reversed)?;
                let t_len = inputs.len();
                let outputs = (0..t_len)
                    .map(|t| {
                        let mut v = fwd_out[t].clone();
                        v.extend_from_slice(&bwd_out[t_len - 1 - t]);
                        v
                    })
                    .collect();
                Ok((
                    outputs,
                    LayerCache {
                        forward: fwd_cache,
                        backward: Some(bwd_cache),
                    },
                ))
            }
        }
    }

    fn backward(
        &self,
        cache: &LayerCache,
        d_outputs: &[Vec<f64>],
        grads: &mut [Matrix],
    ) -> Result<Vec<Vec<f64>>, ModelError> {
        let h = self.forward.hidden_dim();
        let n_fwd = self.forward.params().len();
        let t_len = d_outputs.len();
        let d_fwd: Vec<Vec<f64>> = d_outputs.iter().map(|d| d[..h].to_vec()).collect();
        let mut d_inputs = self
            .forward
            .backward_sequence(&cache.forward, &d_fwd, &mut grads[..n_fwd])?;
        if let (Some(bwd), Some(bwd_cache)) = (&self.backward, &cache.backward) {
            let d_bwd: Vec<Vec<f64>> = (0..t_len).map(|s| d_outputs[t_len - 1 - s][h..].to_vec()).collect();
            let d_rev = bwd.backward_sequence(bwd_cache, &d_bwd, &mut grads[n_fwd..])?;
            for (s, d) in d_rev.into_iter().enumerate() {
                for (acc, v) in d_inputs[t_len - 1 - s].iter_mut().zip(d) {
                    *acc += v;
                }
            }
        }
        Ok(d_inputs)
    }

    /// Final representation: last forward state, plus the backward cell's
    /// last state (which sits at t = 0) when bidirectional.
    fn final_state(&self, outputs: &[Vec<f64>]) -> Vec<f64> {
        let h = self.forward.hidden_dim();
        let last = outputs.last().expect("non-empty sequence");
        let mut v = last[..h].to_vec();
        if self.backward.is_some() {
            v.extend_from_slice(&outputs[0][h..]);
        }
        v
    }
}

/// Everything a forward pass produced that the backward pass needs.
#[derive(Clone, Debug)]
pub struct ForwardCache {
    network_id: u64,
    revision: u64,
    layer_caches: Vec<LayerCache>,
    seq_len: usize,
    /// Final representation before dropout.
    pub representation: Vec<f64>,
    /// Dropout multipliers (0 or 1/(1−rate)); all ones at inference.
    pub dropout_mask: Vec<f64>,
    /// Representation after dropout, as seen by the dense head.
    pub head_input: Vec<f64>,
    pub prediction: f64,
}

impl ForwardCache {
    pub fn len(&self) -> usize {
        self.seq_len
    }

    pub fn is_empty(&self) -> bool {
        self.seq_len == 0
    }
}

static NEXT_NETWORK_ID: AtomicU64 = AtomicU64::new(1);

fn next_network_id() -> u64 {
    NEXT_NETWORK_ID.fetch_add(1, Ordering::Relaxed)
}

/// Recurrent stack plus dense regression head.
#[derive(Debug)]
pub struct Network {
    spec: NetworkSpec,
    layers: Vec<RecurrentLayer>,
    head_w: Matrix,
    head_b: Matrix,
    id: u64,
    revision: u64,
}

impl Clone for Network {
    fn clone(&self) -> Self {
        Self {
            spec: self.spec.clone(),
            layers: self.layers.clone(),
            head_w: self.head_w.clone(),
            head_b: self.head_b.clone(),
            id: next_network_id(),
            revision: 0,
        }
    }
}

impl PartialEq for Network {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
            && self.layers == other.layers
            && self.head_w == other.head_w
            && self.head_b == other.head_b
    }
}

/// Gradients in the order of [`Network::params`].
pub type Gradients = Vec<Matrix>;

impl Network {
    pub fn new(spec: NetworkSpec, rng: &mut SeededRng) -> Result<Self, ModelError> {
        spec.validate()?;
        let mut layers = Vec::with_capacity(spec.layers);
        let mut in_dim = spec.input_dim;
        for _ in 0..spec.layers {
            let forward = RecurrentCell::new(spec.cell, in_dim, spec.units, rng);
            let backward = spec
                .bidirectional
                .then(|| RecurrentCell::new(spec.cell, in_dim, spec.units, rng));
            layers.push(RecurrentLayer { forward, backward });
            in_dim = spec.head_width();
        }
        let head_w = glorot_init(1, spec.head_width(), rng);
        Ok(Self {
            head_b: Matrix::zeros(1, 1),
            head_w,
            layers,
            spec,
            id: next_network_id(),
            revision: 0,
        })
    }

    /// Assembles a network from explicit parts, checking that shapes agree with `spec`.
    pub fn from_parts(
        spec: NetworkSpec,
        layers: Vec<RecurrentLayer>,
        head_w: Matrix,
        head_b: Matrix,
    ) -> Result<Self, ModelError> {
        spec.validate()?;
        if layers.len() != spec.layers {
            return Err(ModelError::Config(format!(
                "spec declares {} layers, got {}",
                spec.layers,
                layers.len()
            )));
        }
        let mut in_dim = spec.input_dim;
        for layer in &layers {
            for cell in std::iter::once(&layer.forward).chain(layer.backward.as_ref()) {
                if cell.kind() != spec.cell || cell.input_dim() != in_dim || cell.hidden_dim() != spec.units {
                    return Err(ModelError::Config("cell does not match spec".into()));
                }
            }
            if layer.backward.is_some() != spec.bidirectional {
                return Err(ModelError::Config("directionality does not match spec".into()));
            }
            in_dim = spec.head_width();
        }
        if head_w.shape() != (1, spec.head_width()) || head_b.shape() != (1, 1) {
            return Err(ModelError::Config("dense head shape does not match spec".into()));
        }
        Ok(Self {
            spec,
            layers,
            head_w,
            head_b,
            id: next_network_id(),
            revision: 0,
        })
    }

    pub fn spec(&self) -> &NetworkSpec {
        &self.spec
    }

    pub fn layers(&self) -> &[RecurrentLayer] {
        &self.layers
    }

    pub fn head(&self) -> (&Matrix, &Matrix) {
        (&self.head_w, &self.head_b)
    }

    /// Parameters in a fixed order: per layer the forward cell then the
    /// backward cell, then the head weights and bias.
    pub fn params(&self) -> Vec<&Matrix> {
        let mut out = Vec::new();
        for layer in &self.layers {
            out.extend(layer.forward.params());
            if let Some(b) = &layer.backward {
                out.extend(b.params());
            }
        }
        out.push(&self.head_w);
        out.push(&self.head_b);
        out
    }

    /// Mutable access to every parameter. Invalidates outstanding forward caches.
    pub fn params_mut(&mut self) -> Vec<&mut Matrix> {
        self.revision += 1;
        let mut out = Vec::new();
        for layer in &mut self.layers {
            out.extend(layer.forward.params_mut());
            if let Some(b) = &mut layer.backward {
                out.extend(b.params_mut());
            }
        }
        out.push(&mut self.head_w);
        out.push(&mut self.head_b);
        out
    }

    /// Dotted names matching [`Self::params`], e.g. `layer0.fwd.w_r`.
    pub fn param_names(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (i, layer) in self.layers.iter().enumerate() {
            for name in layer.forward.param_names() {
                out.push(format!("layer{i}.fwd.{name}"));
            }
            if let Some(b) = &layer.backward {
                for name in b.param_names() {
                    out.push(format!("layer{i}.bwd.{name}"));
                }
            }
        }
        out.push("head.w".into());
        out.push("head.b".into());
        out
    }

    pub fn param_shapes(&self) -> Vec<(usize, usize)> {
        self.params().iter().map(|m| m.shape()).collect()
    }

    pub fn zero_gradients(&self) -> Gradients {
        self.param_shapes().into_iter().map(|(r, c)| Matrix::zeros(r, c)).collect()
    }

    pub fn parameter_count(&self) -> usize {
        self.params().iter().map(|m| m.len()).sum()
    }

    /// Forward pass over one window (`lookback` rows of `input_dim` features).
    ///
    /// `dropout_rng = Some(..)` selects training mode (dropout active);
    /// `None` is inference, where dropout is the identity.
    pub fn forward(
        &self,
        window: &[Vec<f64>],
        dropout_rng: Option<&mut SeededRng>,
    ) -> Result<(f64, ForwardCache), ModelError> {
        if window.is_empty() {
            return Err(ModelError::Config("window must contain at least one timestep".into()));
        }
        if let Some(row) = window.iter().find(|r| r.len() != self.spec.input_dim) {
            return Err(ModelError::dims("window features", self.spec.input_dim, row.len()));
        }
        let mut layer_caches = Vec::with_capacity(self.layers.len());
        let mut seq: Vec<Vec<f64>> = window.to_vec();
        for layer in &self.layers {
            let (out, cache) = layer.forward(&seq)?;
            layer_caches.push(cache);
            seq = out;
        }
        let last = self.layers.last().expect("validated spec has a layer");
        let representation = last.final_state(&seq);
        let (head_input, dropout_mask) = dropout(&representation, self.spec.dropout_rate, dropout_rng)?;
        let prediction = dot(self.head_w.as_slice(), &head_input) + self.head_b.get(0, 0);
        Ok((
            prediction,
            ForwardCache {
                network_id: self.id,
                revision: self.revision,
                layer_caches,
                seq_len: window.len(),
                representation,
                dropout_mask,
                head_input,
                prediction,
            },
        ))
    }

    /// Inference-mode prediction.
    pub fn predict(&self, window: &[Vec<f64>]) -> Result<f64, ModelError> {
        Ok(self.forward(window, None)?.0)
    }

    /// Gradient of `d_prediction · prediction` w.r.t. every parameter.
    pub fn backward(&self, cache: &ForwardCache, d_prediction: f64) -> Result<Gradients, ModelError> {
        let mut grads = self.zero_gradients();
        self.backward_into(cache, d_prediction, &mut grads)?;
        Ok(grads)
    }

    /// Like [`Self::backward`] but accumulates into existing gradient buffers,
    /// which is what mini-batch training wants.
    pub fn backward_into(
        &self,
        cache: &ForwardCache,
        d_prediction: f64,
        grads: &mut [Matrix],
    ) -> Result<(), ModelError> {
        if cache.network_id != self.id || cache.revision != self.revision {
            return Err(ModelError::StaleCache(
                "forward cache was produced by different weights".into(),
            ));
        }
        if cache.layer_caches.len() != self.layers.len() || grads.len() != self.params().len() {
            return Err(ModelError::StaleCache("cache/gradient layout mismatch".into()));
        }

        let n = grads.len();
        grads[n - 2].add_slice(&cache.head_input.iter().map(|v| v * d_prediction).collect::<Vec<_>>());
        grads[n - 1].as_mut_slice()[0] += d_prediction;

        let d_repr: Vec<f64> = self
            .head_w
            .as_slice()
            .iter()
            .zip(&cache.dropout_mask)
            .map(|(w, m)| d_prediction * w * m)
            .collect();

        // Upstream gradient for the top layer's per-step outputs.
        let t_len = cache.seq_len;
        let h = self.spec.units;
        let mut d_seq = vec![vec![0.0; self.spec.head_width()]; t_len];
        d_seq[t_len - 1][..h].copy_from_slice(&d_repr[..h]);
        if self.spec.bidirectional {
            d_seq[0][h..].copy_from_slice(&d_repr[h..]);
        }

        let offsets = self.layer_param_offsets();
        for (idx, layer) in self.layers.iter().enumerate().rev() {
            let (start, end) = offsets[idx];
            d_seq = layer.backward(&cache.layer_caches[idx], &d_seq, &mut grads[start..end])?;
        }
        Ok(())
    }

    fn layer_param_offsets(&self) -> Vec<(usize, usize)> {
        let mut offsets = Vec::with_capacity(self.layers.len());
        let mut start = 0;
        for layer in &self.layers {
            let count = layer.forward.params().len() + layer.backward.as_ref().map_or(0, |b| b.params().len());
            offsets.push((start, start + count));
            start += count;
        }
        offsets
    }
}
