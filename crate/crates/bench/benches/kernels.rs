use std::path::Path;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use gru_vader_bench::{price_path, random_window, TWEETS};
use gru_vader_core::baselines::{fit_css, ArimaOrder};
use gru_vader_core::models::{CellKind, Network, NetworkSpec};
use gru_vader_core::numcore::SeededRng;
use gru_vader_core::sentiment::{load_lexicon_with, score_additive, score_vader, DuplicatePolicy};

fn recurrent_step(c: &mut Criterion) {
    let mut group = c.benchmark_group("forward_backward");
    let window = random_window(30, 2, 7);
    for cell in [CellKind::Gru, CellKind::Lstm] {
        for units in [16, 50] {
            let mut spec = NetworkSpec::gru(units, 2);
            spec.cell = cell;
            let net = Network::new(spec, &mut SeededRng::new(3)).unwrap();
            group.bench_with_input(BenchmarkId::new(cell.to_string(), units), &net, |b, net| {
                let mut rng = SeededRng::new(11);
                b.iter(|| {
                    let (y, cache) = net.forward(black_box(&window), Some(&mut rng)).unwrap();
                    net.backward(&cache, y - 0.5).unwrap()
                })
            });
        }
    }
    group.finish();
}

fn sentiment(c: &mut Criterion) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/lexicons/vader_lexicon.txt");
    let lexicon = load_lexicon_with(&path, DuplicatePolicy::LastWins).unwrap();
    c.bench_function("vader_six_tweets", |b| {
        b.iter(|| TWEETS.iter().map(|t| score_vader(black_box(t), &lexicon).compound).sum::<f64>())
    });
    c.bench_function("additive_six_tweets", |b| {
        b.iter(|| TWEETS.iter().map(|t| score_additive(black_box(t), &lexicon)).sum::<f64>())
    });
}

fn arima(c: &mut Criterion) {
    let prices = price_path(250, 5);
    let mut group = c.benchmark_group("css_fit");
    group.sample_size(20);
    for (p, q) in [(1, 0), (5, 0), (2, 1)] {
        let order = ArimaOrder { p, d: 1, q };
        group.bench_function(order.to_string(), |b| {
            b.iter(|| fit_css(black_box(&prices), order, false, None).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, recurrent_step, sentiment, arima);
criterion_main!(benches);
