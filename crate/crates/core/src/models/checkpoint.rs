//! Flat-text checkpoint format.
//!
//! ```text
//! gru-vader-checkpoint 1
//! cell gru
//! layers 1
//! bidirectional false
//! units 50
//! dropout_rate 0.2
//! input_dim 2
//! meta <key> <value...>          (zero or more)
//! tensor <name> <rows> <cols>
//! <row 0 values, space separated>
//! ...
//! end
//! ```
//!
//! Values are written with Rust's shortest round-trip float formatting, so a
//! save/load cycle reproduces every weight bit for bit.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::numcore::Matrix;

use super::network::{Network, NetworkSpec, RecurrentCell, RecurrentLayer};
use super::{GruCell, LstmCell, ModelError};

pub const CHECKPOINT_MAGIC: &str = "gru-vader-checkpoint";
pub const CHECKPOINT_VERSION: u32 = 1;

/// A network plus free-form string metadata (scaler parameters, lookback, ...).
#[derive(Clone, Debug, PartialEq)]
pub struct Checkpoint {
    pub network: Network,
    pub metadata: BTreeMap<String, String>,
}

impl Checkpoint {
    pub fn new(network: Network) -> Self {
        Self {
            network,
            metadata: BTreeMap::new(),
        }
    }

    pub fn to_text(&self) -> String {
        let spec = self.network.spec();
        let mut out = String::new();
        let _ = writeln!(out, "{CHECKPOINT_MAGIC} {CHECKPOINT_VERSION}");
        let _ = writeln!(out, "cell {}", spec.cell);
        let _ = writeln!(out, "layers {}", spec.layers);
        let _ = writeln!(out, "bidirectional {}", spec.bidirectional);
        let _ = writeln!(out, "units {}", spec.units);
        let _ = writeln!(out, "dropout_rate {:?}", spec.dropout_rate);
        let _ = writeln!(out, "input_dim {}", spec.input_dim);
        for (k, v) in &self.metadata {
            let _ = writeln!(out, "meta {k} {v}");
        }
        for (name, m) in self.network.param_names().iter().zip(self.network.params()) {
            let _ = writeln!(out, "tensor {name} {} {}", m.rows(), m.cols());
            for r in 0..m.rows() {
                let row: Vec<String> = m.row(r).iter().map(|v| format!("{v:?}")).collect();
                let _ = writeln!(out, "{}", row.join(" "));
            }
        }
        out.push_str("end\n");
        out
    }

    pub fn parse(text: &str) -> Result<Self, ModelError> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end()));
        let err = |line: usize, msg: String| ModelError::Checkpoint { line, msg };

        let (ln, header) = lines.next().ok_or_else(|| err(1, "empty checkpoint".into()))?;
        let mut parts = header.split_whitespace();
        if parts.next() != Some(CHECKPOINT_MAGIC) {
            return Err(err(ln, "not a gru-vader checkpoint".into()));
        }
        let version: u32 = parts
            .next()
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| err(ln, "missing version".into()))?;
        if version != CHECKPOINT_VERSION {
            return Err(ModelError::Version {
                found: version,
                expected: CHECKPOINT_VERSION,
            });
        }

        let mut fields: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
        let mut metadata = BTreeMap::new();
        let mut tensors: Vec<(String, Matrix)> = Vec::new();
        let mut saw_end = false;

        while let Some((ln, line)) = lines.next() {
            if line.is_empty() {
                continue;
            }
            let (key, rest) = line.split_once(' ').unwrap_or((line, ""));
            match key {
                "end" => {
                    saw_end = true;
                    break;
                }
                "meta" => {
                    let (k, v) = rest.split_once(' ').unwrap_or((rest, ""));
                    metadata.insert(k.to_string(), v.to_string());
                }
                "tensor" => {
                    let p: Vec<&str> = rest.split_whitespace().collect();
                    if p.len() != 3 {
                        return Err(err(ln, "tensor header needs name rows cols".into()));
                    }
                    let rows: usize = p[1].parse().map_err(|_| err(ln, "bad row count".into()))?;
                    let cols: usize = p[2].parse().map_err(|_| err(ln, "bad column count".into()))?;
                    let mut data = Vec::with_capacity(rows * cols);
                    for _ in 0..rows {
                        let (rl, row) = lines
                            .next()
                            .ok_or_else(|| err(ln, format!("tensor {} truncated", p[0])))?;
                        let before = data.len();
                        for tok in row.split_whitespace() {
                            data.push(
                                tok.parse::<f64>()
                                    .map_err(|_| err(rl, format!("bad number {tok:?}")))?,
                            );
                        }
                        if data.len() - before != cols {
                            return Err(err(rl, format!("expected {cols} values")));
                        }
                    }
                    let m = Matrix::from_vec(rows, cols, data).map_err(|e| err(ln, e.to_string()))?;
                    tensors.push((p[0].to_string(), m));
                }
                _ => {
                    fields.insert(key, (ln, rest));
                }
            }
        }
        if !saw_end {
            return Err(err(text.lines().count(), "missing end marker".into()));
        }

        let get = |k: &str| -> Result<(usize, &str), ModelError> {
            fields.get(k).copied().ok_or_else(|| err(0, format!("missing field {k}")))
        };
        let parse_field = |k: &str| -> Result<usize, ModelError> {
            let (ln, v) = get(k)?;
            v.parse().map_err(|_| err(ln, format!("bad {k}")))
        };
        let spec = NetworkSpec {
            cell: get("cell")?.1.parse()?,
            layers: parse_field("layers")?,
            bidirectional: {
                let (ln, v) = get("bidirectional")?;
                v.parse().map_err(|_| err(ln, "bad bidirectional".into()))?
            },
            units: parse_field("units")?,
            dropout_rate: {
                let (ln, v) = get("dropout_rate")?;
                v.parse().map_err(|_| err(ln, "bad dropout_rate".into()))?
            },
            input_dim: parse_field("input_dim")?,
        };
        spec.validate()?;

        let network = assemble(spec, tensors)?;
        Ok(Self { network, metadata })
    }

    pub fn save(&self, path: &Path) -> Result<(), ModelError> {
        std::fs::write(path, self.to_text()).map_err(|e| ModelError::Io(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, ModelError> {
        let text = std::fs::read_to_string(path).map_err(|e| ModelError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }
}

fn assemble(spec: NetworkSpec, tensors: Vec<(String, Matrix)>) -> Result<Network, ModelError> {
    let mut by_name: BTreeMap<String, Matrix> = tensors.into_iter().collect();
    let mut take = |name: String| {
        by_name
            .remove(&name)
            .ok_or_else(|| ModelError::Checkpoint { line: 0, msg: format!("missing tensor {name}") })
    };

    let mut layers = Vec::with_capacity(spec.layers);
    let mut in_dim = spec.input_dim;
    for i in 0..spec.layers {
        let mut cell_for = |dir: &str| -> Result<RecurrentCell, ModelError> {
            let mut cell = match spec.cell {
                super::CellKind::Gru => RecurrentCell::Gru(GruCell::zeros(in_dim, spec.units)),
                super::CellKind::Lstm => RecurrentCell::Lstm(LstmCell::zeros(in_dim, spec.units)),
            };
            let names = cell.param_names();
            for (name, slot) in names.iter().zip(cell.params_mut()) {
                let m = take(format!("layer{i}.{dir}.{name}"))?;
                if m.shape() != slot.shape() {
                    return Err(ModelError::Checkpoint {
                        line: 0,
                        msg: format!("tensor layer{i}.{dir}.{name} has shape {:?}, expected {:?}", m.shape(), slot.shape()),
                    });
                }
                *slot = m;
            }
            Ok(cell)
        };
        let forward = cell_for("fwd")?;
        let backward = if spec.bidirectional { Some(cell_for("bwd")?) } else { None };
        layers.push(RecurrentLayer { forward, backward });
        in_dim = spec.head_width();
    }
    let head_w = take("head.w".into())?;
    let head_b = take("head.b".into())?;
    if let Some(extra) = by_name.keys().next() {
        return Err(ModelError::Checkpoint {
            line: 0,
            msg: format!("unexpected tensor {extra}"),
        });
    }
    Network::from_parts(spec, layers, head_w, head_b)
}
