//! Acceptance suite. Prints one PASS/FAIL line per criterion.
//!
//! Criteria 7 and 8 need the public tweet and price CSVs in
//! `$GRU_VADER_DATA_DIR` (default `<workspace>/data`). Without them those two
//! lines read FAIL with the reason. The process exits non-zero when an
//! evaluated criterion fails, or when any criterion fails and
//! `GRU_VADER_ACCEPTANCE_STRICT=1`.

#[path = "../../core/tests/common/mod.rs"]
mod grad;

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use gru_vader_core::baselines::{fit_css, forecast_walk, persistence_walk, ArimaConfig, ArimaOrder};
use gru_vader_core::eval::{classification_report, qq_points, regression_metrics};
use gru_vader_core::ingest::FeatureTable;
use gru_vader_core::models::{CellKind, Network, NetworkSpec};
use gru_vader_core::numcore::{AdamState, Matrix, SeededRng, DEFAULT_BETA1, DEFAULT_BETA2, DEFAULT_EPSILON};
use gru_vader_core::sentiment::{load_lexicon_with, score_vader, DuplicatePolicy, Lexicon, SentimentLabel};
use gru_vader_core::training::{evaluate_mse, prepare, train, DataConfig, TrainConfig};
use serde_json::Value;

const ADAM_TOL: f64 = 1e-12;
const SUM_TOL: f64 = 1e-9;
const GOOD_COMPOUND: f64 = 0.4404;
const GOOD_TOL: f64 = 1e-4;
const LEXICON_ENTRIES: usize = 7517;
const ORACLE_TOL: f64 = 1e-12;
const PHI: f64 = 0.7;
const PHI_TOL: f64 = 0.05;
const LEARN_RATIO: f64 = 0.10;
const QQ_SLOPE: (f64, f64) = (0.97, 1.03);
const TSLA_TWEETS: usize = 37_422;
const TSLA_R: f64 = 0.44;
const TSLA_R_TOL: f64 = 0.15;
const TABLE_TICKERS: [&str; 7] = ["TSLA", "AAPL", "BA", "META", "NIO", "PG", "AMD"];
const MIN_ACCURACY: f64 = 95.0;

enum Outcome {
    Pass(String),
    Fail(String),
    /// Inputs are missing, so the criterion could not be evaluated.
    Unavailable(String),
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Outcome::Pass(detail)
    } else {
        Outcome::Fail(detail)
    }
}

fn workspace() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn vader() -> Lexicon {
    load_lexicon_with(&workspace().join("data/lexicons/vader_lexicon.txt"), DuplicatePolicy::LastWins).unwrap()
}

fn normals(seed: u64, n: usize) -> Vec<f64> {
    let mut rng = SeededRng::new(seed);
    (0..n)
        .map(|_| {
            let u1 = 1.0 - rng.uniform();
            let u2 = rng.uniform();
            (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
        })
        .collect()
}

fn gradients() -> Outcome {
    let t0 = Instant::now();
    let groups: [(&str, [CellKind; 2], usize, bool); 4] = [
        ("gru", [CellKind::Gru; 2], 1, false),
        ("lstm", [CellKind::Lstm; 2], 1, false),
        ("bidirectional", [CellKind::Gru, CellKind::Lstm], 1, true),
        ("2-layer", [CellKind::Gru, CellKind::Lstm], 2, false),
    ];
    let mut worst = (0.0f64, String::new());
    let mut checked = 0;
    for (name, cells, layers, bidirectional) in groups {
        for i in 0..20u64 {
            let mut rng = SeededRng::new(9000 + 31 * i + layers as u64);
            let spec = NetworkSpec {
                cell: cells[i as usize % 2],
                layers,
                bidirectional,
                units: 1 + (rng.uniform() * 4.0) as usize,
                dropout_rate: 0.0,
                input_dim: 1 + (rng.uniform() * 2.0) as usize,
            };
            let lookback = 1 + (rng.uniform() * 5.0) as usize;
            let mut net = Network::new(spec, &mut rng).unwrap();
            let window = grad::random_window(&mut rng, lookback, net.spec().input_dim);
            let res = grad::check_gradients(&mut net, &window, rng.uniform(), None);
            checked += res.checked;
            if res.max_rel_error > worst.0 {
                worst = (res.max_rel_error, format!("{name} #{i} {}", res.worst_param));
            }
        }
    }
    let elapsed = t0.elapsed();
    check(
        worst.0 <= grad::GRAD_REL_TOL && elapsed < Duration::from_secs(60),
        format!("80 networks, {checked} entries, max rel err {:.2e} ({}), {:.1?}", worst.0, worst.1, elapsed),
    )
}

fn adam() -> Outcome {
    let (p0, g, lr) = (0.5f64, 0.2f64, 1e-3f64);
    let mut p = Matrix::filled(1, 1, p0);
    let mut state = AdamState::new(&[(1, 1)]);
    state.step([&mut p], &[Matrix::filled(1, 1, g)], lr).unwrap();
    let m = (1.0 - DEFAULT_BETA1) * g;
    let v = (1.0 - DEFAULT_BETA2) * g * g;
    let m_hat = m / (1.0 - DEFAULT_BETA1);
    let v_hat = v / (1.0 - DEFAULT_BETA2);
    let expected = p0 - lr * m_hat / (v_hat.sqrt() + DEFAULT_EPSILON);
    let err = (p.get(0, 0) - expected).abs();

    let mut q = Matrix::filled(1, 1, p0);
    let mut frozen = AdamState::new(&[(1, 1)]);
    frozen.step([&mut q], &[Matrix::filled(1, 1, g)], 0.0).unwrap();
    let identity = q.get(0, 0) == p0;
    check(
        err <= ADAM_TOL && identity,
        format!("|Δ| = {err:.1e} vs hand-unrolled update, lr = 0 identity: {identity}"),
    )
}

const FUZZ_WORDS: &[&str] = &[
    "good", "bad", "great", "terrible", "not", "never", "very", "extremely", "kinda", "but", "GREAT",
    "BAD", "love", "hate", "no", "without", "doubt", "kind", "of", "sort", "the", "stock", "moon",
    "crash", ":)", ":(", "lol", "isn't", "hardly", "sucks", "the bomb", "least", "WIN", "fail", "$TSLA",
    "@user", "http://x.co/a", "😀", "",
];
const FUZZ_PUNCT: &[&str] = &["", "", "", "!", "!!", "?", "?!", ",", ".", "...", "!!!!"];

fn sentiment() -> Outcome {
    let lex = vader();
    let mut rng = SeededRng::new(31337);
    let mut bad = None;
    for i in 0..10_000 {
        let n = (rng.uniform() * 16.0) as usize;
        let text: Vec<String> = (0..n)
            .map(|_| {
                let w = FUZZ_WORDS[(rng.uniform() * FUZZ_WORDS.len() as f64) as usize];
                let p = FUZZ_PUNCT[(rng.uniform() * FUZZ_PUNCT.len() as f64) as usize];
                format!("{w}{p}")
            })
            .collect();
        let text = text.join(" ");
        let s = score_vader(&text, &lex);
        let ok = (-1.0..=1.0).contains(&s.compound) && (s.pos + s.neg + s.neu - 1.0).abs() <= SUM_TOL;
        if !ok && bad.is_none() {
            bad = Some(format!("input {i} {text:?} -> {s:?}"));
        }
    }
    let empty = score_vader("", &lex).compound;
    let good = score_vader("good", &lex).compound;
    let reference: f64 = include_str!("../../core/tests/fixtures/vader_reference.tsv")
        .lines()
        .find_map(|l| l.strip_prefix("good\t"))
        .and_then(|rest| rest.split('\t').next())
        .and_then(|c| c.parse().ok())
        .expect("reference fixture has a row for \"good\"");
    let entries = lex.entries_read();
    let ok = bad.is_none()
        && empty == 0.0
        && entries == LEXICON_ENTRIES
        && (good - GOOD_COMPOUND).abs() <= GOOD_TOL
        && (good - reference).abs() <= GOOD_TOL;
    check(
        ok,
        format!(
            "10^4 fuzzed inputs {}, empty -> {empty}, {entries} lexicon entries, good -> {good:.6} (reference {reference:.6})",
            bad.unwrap_or_else(|| "in range".into())
        ),
    )
}

fn label(i: u64) -> SentimentLabel {
    SentimentLabel::ALL[(i % 3) as usize]
}

/// Weighted P/R/F1 by explicit counting over all pairs.
fn brute_classification(actual: &[SentimentLabel], predicted: &[SentimentLabel]) -> [f64; 4] {
    let n = actual.len() as f64;
    let mut out = [0.0; 4];
    out[0] = actual.iter().zip(predicted).filter(|(a, p)| a == p).count() as f64 / n;
    for c in SentimentLabel::ALL {
        let tp = actual.iter().zip(predicted).filter(|&(a, p)| *a == c && *p == c).count() as f64;
        let pred_c = predicted.iter().filter(|&&p| p == c).count() as f64;
        let support = actual.iter().filter(|&&a| a == c).count() as f64;
        let prec = if pred_c == 0.0 { 0.0 } else { tp / pred_c };
        let rec = if support == 0.0 { 0.0 } else { tp / support };
        let f1 = if prec + rec == 0.0 { 0.0 } else { 2.0 * prec * rec / (prec + rec) };
        out[1] += support / n * prec;
        out[2] += support / n * rec;
        out[3] += support / n * f1;
    }
    out
}

fn metric_oracles() -> Outcome {
    let mut rng = SeededRng::new(4242);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let n = 5 + (rng.uniform() * 60.0) as usize;
        let actual: Vec<SentimentLabel> = (0..n).map(|_| label((rng.uniform() * 3.0) as u64)).collect();
        let predicted: Vec<SentimentLabel> = (0..n).map(|_| label((rng.uniform() * 3.0) as u64)).collect();
        let r = classification_report(&actual, &predicted).unwrap();
        let want = brute_classification(&actual, &predicted);
        for (g, w) in [r.accuracy, r.precision, r.recall, r.f1].iter().zip(want) {
            worst = worst.max((g - w).abs());
        }

        let k = 1 + (rng.uniform() * 2.0) as usize;
        let m = k + 3 + (rng.uniform() * 50.0) as usize;
        let y: Vec<f64> = (0..m).map(|_| 10.0 + 90.0 * rng.uniform()).collect();
        let p: Vec<f64> = y.iter().map(|v| v + 5.0 * (rng.uniform() - 0.5)).collect();
        let got = regression_metrics(&y, &p, k).unwrap();
        let mf = m as f64;
        let mut mae = 0.0;
        let mut mse = 0.0;
        for i in 0..m {
            mae += (y[i] - p[i]).abs();
            mse += (y[i] - p[i]) * (y[i] - p[i]);
        }
        mae /= mf;
        mse /= mf;
        let mean = y.iter().sum::<f64>() / mf;
        let ss_tot: f64 = y.iter().map(|v| (v - mean) * (v - mean)).sum();
        let r2 = 1.0 - mse * mf / ss_tot;
        let adj = 1.0 - (1.0 - r2) * (mf - 1.0) / (mf - k as f64 - 1.0);
        for (g, w) in [(got.mae, mae), (got.mse, mse), (got.adjusted_r2, adj)] {
            worst = worst.max((g - w).abs() / w.abs().max(1.0));
        }
    }
    let y: Vec<f64> = (1..=10).map(f64::from).collect();
    let mean_pred = vec![5.5; 10];
    let adj = regression_metrics(&y, &mean_pred, 1).unwrap().adjusted_r2;
    check(
        worst <= ORACLE_TOL && adj == -0.125,
        format!("100 instances, max deviation {worst:.1e}; mean predictor n=10 k=1 adjusted R² = {adj}"),
    )
}

fn arima() -> Outcome {
    let t0 = Instant::now();
    let e = normals(2024, 2200);
    let mut x = vec![0.0; e.len()];
    for t in 1..x.len() {
        x[t] = PHI * x[t - 1] + e[t];
    }
    let series = &x[200..];
    let phi = fit_css(series, ArimaOrder::new(1, 0, 0).unwrap(), false, None).unwrap().phi[0];

    let walk: Vec<f64> = normals(77, 300).iter().scan(100.0, |p, d| {
        *p += d;
        Some(*p)
    }).collect();
    let (hist, test) = walk.split_at(200);
    let cfg = ArimaConfig { p: 0, d: 1, q: 0, intercept: Some(false), ..Default::default() };
    let arima = forecast_walk(&cfg, hist, test, None).unwrap().predictions;
    let naive = persistence_walk(&hist[hist.len() - 1..], test).unwrap();
    let identical = arima.len() == naive.len() && arima.iter().zip(&naive).all(|(a, b)| a.to_bits() == b.to_bits());
    let elapsed = t0.elapsed();
    check(
        (phi - PHI).abs() <= PHI_TOL && identical && elapsed < Duration::from_secs(60),
        format!("phi_hat = {phi:.4}, ARIMA(0,1,0) == persistence on {} steps: {identical}, {elapsed:.1?}", test.len()),
    )
}

fn sine_table() -> FeatureTable {
    let prices: Vec<f64> = (0..400)
        .map(|t| 100.0 + 10.0 * (2.0 * std::f64::consts::PI * t as f64 / 40.0).sin())
        .collect();
    FeatureTable::from_prices("SINE", chrono::NaiveDate::from_ymd_opt(2021, 1, 1).unwrap(), &prices, None).unwrap()
}

fn learning() -> Outcome {
    let t0 = Instant::now();
    let data = prepare(&sine_table(), &DataConfig { lookback: 30, ..Default::default() }, false).unwrap();
    let spec = NetworkSpec { dropout_rate: 0.2, ..NetworkSpec::gru(50, 1) };
    let cfg = TrainConfig { max_epochs: 200, seed: 7, ..Default::default() };
    let (net, hist) = train(&spec, &data.train, &data.val, &cfg).unwrap();
    let (_, again) = train(&spec, &data.train, &data.val, &cfg).unwrap();
    let first = hist.epochs[0].val_loss;
    let best = hist.best_val_loss().unwrap();
    let deterministic = hist == again && evaluate_mse(&net, &data.val).unwrap() == best;
    let elapsed = t0.elapsed();
    check(
        best <= LEARN_RATIO * first && deterministic && elapsed < Duration::from_secs(300),
        format!(
            "val MSE {first:.3e} -> {best:.3e} ({:.3}% of epoch 1) in {} epochs, rerun identical: {deterministic}, {elapsed:.1?} for two runs",
            100.0 * best / first,
            hist.len()
        ),
    )
}

fn diagnostics() -> Outcome {
    let slope = qq_points(&normals(2024, 10_000)).unwrap().slope();
    check((QQ_SLOPE.0..=QQ_SLOPE.1).contains(&slope), format!("slope {slope:.4} on 10^4 N(0,1) residuals"))
}

struct Dataset {
    stocks: PathBuf,
    tweets: PathBuf,
}

fn dataset() -> Result<Dataset, String> {
    let dir = std::env::var_os("GRU_VADER_DATA_DIR").map(PathBuf::from).unwrap_or_else(|| workspace().join("data"));
    let d = Dataset { stocks: dir.join("stock_yfinance_data.csv"), tweets: dir.join("stock_tweets.csv") };
    for p in [&d.stocks, &d.tweets] {
        if !p.is_file() {
            return Err(format!("dataset not found: {}", p.display()));
        }
    }
    Ok(d)
}

fn cli(args: &[&str]) -> u8 {
    let mut full = vec!["gru-vader"];
    full.extend_from_slice(args);
    gru_vader_cli::run_from(full)
}

fn dataset_level(d: &Dataset) -> Outcome {
    let out = tempfile::tempdir().unwrap();
    let code = cli(&[
        "--out", out.path().to_str().unwrap(), "correlate",
        "--stocks", d.stocks.to_str().unwrap(), "--tweets", d.tweets.to_str().unwrap(),
        "--tickers", &TABLE_TICKERS.join(","),
    ]);
    if code != 0 {
        return Outcome::Fail(format!("correlate exited with {code}"));
    }
    let v: Value = serde_json::from_str(&std::fs::read_to_string(out.path().join("correlation.json")).unwrap()).unwrap();
    let rows = v["rows"].as_array().cloned().unwrap_or_default();
    let mut ranked: Vec<(String, f64)> = rows
        .iter()
        .filter_map(|r| Some((r["ticker"].as_str()?.to_string(), r["pearson_r"].as_f64()?)))
        .collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1));
    let tsla = rows.iter().find(|r| r["ticker"] == "TSLA");
    let volume = tsla.and_then(|r| r["tweets"].as_u64()).unwrap_or(0) as usize;
    let r = tsla.and_then(|r| r["pearson_r"].as_f64()).unwrap_or(f64::NAN);
    let top: Vec<&str> = ranked.iter().take(2).map(|(t, _)| t.as_str()).collect();
    let top_ok = top.contains(&"TSLA") && top.contains(&"META");
    check(
        volume == TSLA_TWEETS && (r - TSLA_R).abs() <= TSLA_R_TOL && top_ok,
        format!("TSLA tweets {volume}, TSLA r = {r:.3}, top two {top:?}"),
    )
}

fn end_to_end(d: &Dataset) -> Outcome {
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for dir in &dirs {
        let code = cli(&[
            "--seed", "42", "--out", dir.path().to_str().unwrap(), "compare", "--ticker", "TSLA", "--sentiment", "with",
            "--stocks", d.stocks.to_str().unwrap(), "--tweets", d.tweets.to_str().unwrap(),
        ]);
        if code != 0 {
            return Outcome::Fail(format!("compare exited with {code}"));
        }
    }
    let read = |i: usize, f: &str| std::fs::read(dirs[i].path().join(f)).unwrap();
    let identical = read(0, "compare.json") == read(1, "compare.json") && read(0, "compare.csv") == read(1, "compare.csv");
    let v: Value = serde_json::from_slice(&read(0, "compare.json")).unwrap();
    let rows = v["rows"].as_array().cloned().unwrap_or_default();
    let finite = rows.iter().all(|r| {
        ["adjusted_r2", "mae", "mse", "accuracy_pct"].iter().all(|k| r[*k].as_f64().is_some_and(f64::is_finite))
    });
    let tuned = rows
        .iter()
        .find(|r| r["key"] == "gru-tuned" && r["with_sentiment"] == true)
        .and_then(|r| r["accuracy_pct"].as_f64())
        .unwrap_or(f64::NAN);
    check(
        rows.len() == 10 && finite && identical && tuned >= MIN_ACCURACY,
        format!("{} rows, all finite: {finite}, tuned GRU + sentiment accuracy {tuned:.2}%, rerun byte-identical: {identical}", rows.len()),
    )
}

fn main() {
    let data = dataset();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("gradient correctness", Box::new(gradients)),
        ("optimizer correctness", Box::new(adam)),
        ("sentiment engine", Box::new(sentiment)),
        ("metric oracles", Box::new(metric_oracles)),
        ("ARIMA recovery", Box::new(arima)),
        ("learning sanity", Box::new(learning)),
        ("dataset-level targets", Box::new(|| match &data {
            Ok(d) => dataset_level(d),
            Err(e) => Outcome::Unavailable(e.clone()),
        })),
        ("end-to-end compare", Box::new(|| match &data {
            Ok(d) => end_to_end(d),
            Err(e) => Outcome::Unavailable(e.clone()),
        })),
        ("residual diagnostics", Box::new(diagnostics)),
    ];

    let strict = std::env::var("GRU_VADER_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    let (mut passed, mut failed, mut unavailable) = (0, 0, 0);
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Outcome::Pass(d) => {
                passed += 1;
                println!("criterion {}: PASS  {name}: {d}", i + 1);
            }
            Outcome::Fail(d) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {d}", i + 1);
            }
            Outcome::Unavailable(d) => {
                unavailable += 1;
                println!("criterion {}: FAIL  {name}: not evaluated, {d}", i + 1);
            }
        }
    }
    println!("acceptance: {passed} passed, {failed} failed, {unavailable} not evaluated (inputs missing)");
    if failed > 0 || (strict && unavailable > 0) {
        std::process::exit(1);
    }
}
