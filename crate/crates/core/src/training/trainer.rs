use rand::seq::SliceRandom;

use crate::models::{ModelError, Network, NetworkSpec};
use crate::numcore::{AdamState, NumError, SeededRng};

use super::config::TrainConfig;
use super::dataset::SupervisedWindows;
use super::history::{EpochRecord, TrainEvent, TrainHistory};
use super::TrainingError;

const INIT_STREAM: u64 = 0;
const SHUFFLE_STREAM: u64 = 1;
const DROPOUT_STREAM: u64 = 2;

/// Inference-mode predictions for every window.
pub fn predict_all(net: &Network, data: &SupervisedWindows) -> Result<Vec<f64>, ModelError> {
    data.x.iter().map(|w| net.predict(w)).collect()
}

/// Inference-mode mean squared error.
pub fn evaluate_mse(net: &Network, data: &SupervisedWindows) -> Result<f64, ModelError> {
    let preds = predict_all(net, data)?;
    let sse: f64 = preds.iter().zip(&data.y).map(|(p, y)| (p - y) * (p - y)).sum();
    Ok(sse / data.len() as f64)
}

/// Trains with a generator seeded from `config.seed`.
pub fn train(
    spec: &NetworkSpec,
    train: &SupervisedWindows,
    val: &SupervisedWindows,
    config: &TrainConfig,
) -> Result<(Network, TrainHistory), TrainingError> {
    train_with_rng(spec, train, val, config, &SeededRng::new(config.seed))
}

fn divergence(epoch: usize, err: impl std::fmt::Display) -> TrainingError {
    TrainingError::Divergence {
        epoch,
        msg: err.to_string(),
    }
}

/// Mini-batch Adam on MSE with ReduceLROnPlateau and EarlyStopping.
///
/// Weight initialization, shuffling and dropout draw from separate child
/// streams of `rng`, so the run depends only on the stream's seed path. The
/// returned network carries the weights of the best validation epoch.
pub fn train_with_rng(
    spec: &NetworkSpec,
    train: &SupervisedWindows,
    val: &SupervisedWindows,
    config: &TrainConfig,
    rng: &SeededRng,
) -> Result<(Network, TrainHistory), TrainingError> {
    config.validate()?;
    if train.is_empty() || val.is_empty() {
        return Err(TrainingError::InsufficientData(
            "training and validation windows must be non-empty".into(),
        ));
    }
    for (name, d) in [("train", train), ("validation", val)] {
        if d.feature_count() != spec.input_dim {
            return Err(TrainingError::Config(format!(
                "{name} windows have {} features but the network expects {}",
                d.feature_count(),
                spec.input_dim
            )));
        }
    }

    let mut net = Network::new(spec.clone(), &mut rng.split(INIT_STREAM))?;
    let mut history = TrainHistory::default();
    if config.max_epochs == 0 {
        return Ok((net, history));
    }

    let mut shuffle_rng = rng.split(SHUFFLE_STREAM);
    let mut dropout_rng = rng.split(DROPOUT_STREAM);
    let mut adam = AdamState::new(&net.param_shapes());
    let mut grads = net.zero_gradients();
    let mut order: Vec<usize> = (0..train.len()).collect();
    let mut lr = config.learning_rate;

    let mut best_net = net.clone();
    let mut best_val = f64::INFINITY;
    let mut plateau_wait = 0;
    let mut stop_wait = 0;

    for epoch in 1..=config.max_epochs {
        order.shuffle(&mut shuffle_rng);
        let mut loss_sum = 0.0;
        for batch in order.chunks(config.batch_size) {
            for g in grads.iter_mut() {
                g.fill(0.0);
            }
            let scale = 2.0 / batch.len() as f64;
            for &i in batch {
                let (pred, cache) = net
                    .forward(&train.x[i], Some(&mut dropout_rng))
                    .map_err(|e| divergence(epoch, e))?;
                let err = pred - train.y[i];
                loss_sum += err * err;
                net.backward_into(&cache, scale * err, &mut grads)
                    .map_err(|e| divergence(epoch, e))?;
            }
            if grads.iter().any(|g| !g.is_finite()) {
                return Err(divergence(epoch, NumError::NonFinite { op: "gradient" }));
            }
            adam.step(net.params_mut(), &grads, lr)?;
        }
        let train_loss = loss_sum / train.len() as f64;
        if !train_loss.is_finite() {
            return Err(divergence(epoch, format!("train loss is {train_loss}")));
        }
        let val_loss = evaluate_mse(&net, val).map_err(|e| divergence(epoch, e))?;
        if !val_loss.is_finite() {
            return Err(divergence(epoch, format!("validation loss is {val_loss}")));
        }

        let mut events = Vec::new();
        if val_loss < best_val - config.min_delta {
            best_val = val_loss;
            best_net = net.clone();
            plateau_wait = 0;
            stop_wait = 0;
            events.push(TrainEvent::Best);
        } else {
            plateau_wait += 1;
            stop_wait += 1;
        }
        let epoch_lr = lr;
        if plateau_wait >= config.lr_reduce_patience {
            let reduced = (lr * config.lr_reduce_factor).max(config.min_lr);
            if reduced < lr {
                lr = reduced;
                events.push(TrainEvent::LrReduced);
                log::debug!("epoch {epoch}: learning rate reduced to {lr}");
            }
            plateau_wait = 0;
        }
        let stop = stop_wait >= config.early_stop_patience;
        if stop {
            events.push(TrainEvent::EarlyStopped);
        }
        history.epochs.push(EpochRecord {
            epoch,
            train_loss,
            val_loss,
            lr: epoch_lr,
            events,
        });
        if stop {
            history.stopped_early = true;
            break;
        }
    }
    Ok((best_net, history))
}
