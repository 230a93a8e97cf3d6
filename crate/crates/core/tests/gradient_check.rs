mod common;

use common::{check_gradients, random_window, GRAD_REL_TOL};
use gru_vader_core::models::{CellKind, Network, NetworkSpec};
use gru_vader_core::numcore::SeededRng;

fn run(kind: CellKind, layers: usize, bidirectional: bool, dropout_rate: f64, instances: u64) {
    for i in 0..instances {
        let mut rng = SeededRng::new(1000 + i);
        let units = 1 + (rng.uniform() * 4.0) as usize;
        let lookback = 1 + (rng.uniform() * 5.0) as usize;
        let input_dim = 1 + (rng.uniform() * 2.0) as usize;
        let spec = NetworkSpec { cell: kind, layers, bidirectional, units, dropout_rate, input_dim };
        let mut net = Network::new(spec, &mut rng).unwrap();
        let window = random_window(&mut rng, lookback, input_dim);
        let target = rng.uniform();
        let seed = (dropout_rate > 0.0).then_some(77 + i);
        let res = check_gradients(&mut net, &window, target, seed);
        assert!(
            res.max_rel_error <= GRAD_REL_TOL,
            "{kind} layers={layers} bi={bidirectional} instance {i}: {} ({})",
            res.max_rel_error,
            res.worst_param
        );
    }
}

#[test]
fn gru_hidden2_lookback3() {
    let mut rng = SeededRng::new(5);
    let spec = NetworkSpec { cell: CellKind::Gru, layers: 1, bidirectional: false, units: 2, dropout_rate: 0.0, input_dim: 1 };
    let mut net = Network::new(spec, &mut rng).unwrap();
    let window = random_window(&mut rng, 3, 1);
    let res = check_gradients(&mut net, &window, 0.3, None);
    assert!(res.max_rel_error <= GRAD_REL_TOL, "{} {}", res.max_rel_error, res.worst_param);
}

#[test]
fn gru_configurations() {
    for (layers, bi) in [(1, false), (2, false), (1, true), (2, true)] {
        run(CellKind::Gru, layers, bi, 0.0, 5);
    }
}

#[test]
fn lstm_configurations() {
    for (layers, bi) in [(1, false), (2, false), (1, true), (2, true)] {
        run(CellKind::Lstm, layers, bi, 0.0, 5);
    }
}

#[test]
fn gradients_hold_through_training_mode_dropout() {
    run(CellKind::Gru, 1, true, 0.3, 5);
    run(CellKind::Lstm, 2, false, 0.3, 5);
}
