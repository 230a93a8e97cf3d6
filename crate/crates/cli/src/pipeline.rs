use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use gru_vader_core::baselines::{forecast_walk, persistence_walk};
use gru_vader_core::eval::{regression_metrics, MetricsReport, ReportMetadata};
use gru_vader_core::ingest::{
    aggregate_daily, filter_tweets, merge, read_stock_csv, read_tweets_csv, FeatureTable, OhlcvBar, TweetRecord,
};
use gru_vader_core::models::{CellKind, Checkpoint, Network, NetworkSpec};
use gru_vader_core::numcore::SeededRng;
use gru_vader_core::sentiment::{DuplicatePolicy, Lexicon, Scorer};
use gru_vader_core::training::{
    predict_all, prepare, random_search, train, PreparedData, ScalerParams, SearchOutcome, TrainConfig, TrainHistory,
};

use crate::args::{DataArgs, LexiconArgs, ScorerArg};
use crate::error::CliError;
use crate::run::RunContext;

/// Applies command-line overrides to `[inputs]`.
pub fn apply_lexicon_args(ctx: &mut RunContext, args: &LexiconArgs) {
    if let Some(s) = args.scorer {
        ctx.config.inputs.scorer = match s {
            ScorerArg::Vader => Scorer::Vader,
            ScorerArg::Additive => Scorer::Additive,
        };
    }
    if let Some(p) = &args.lexicon {
        ctx.config.inputs.lexicon = Some(p.clone());
    }
}

pub fn apply_data_args(ctx: &mut RunContext, args: &DataArgs) {
    if let Some(p) = &args.stocks {
        ctx.config.inputs.stocks = Some(p.clone());
    }
    if let Some(p) = &args.tweets {
        ctx.config.inputs.tweets = Some(p.clone());
    }
    apply_lexicon_args(ctx, &args.lexicon);
}

fn required(path: &Option<PathBuf>, what: &str) -> Result<PathBuf, CliError> {
    path.clone()
        .ok_or_else(|| CliError::Usage(format!("no {what} file: pass --{what} or set inputs.{what}")))
}

pub fn load_lexicon(ctx: &mut RunContext) -> Result<Lexicon, CliError> {
    let path = ctx.config.lexicon_path();
    // record the resolved path so the manifest's config can re-run on its own
    ctx.config.inputs.lexicon = Some(path.clone());
    let text = ctx.read_input_text(&path)?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "lexicon".into());
    // the published VADER file repeats a few tokens; its reference loader keeps the last
    let lex = Lexicon::parse(&name, &text, DuplicatePolicy::LastWins)?;
    if !lex.duplicates().is_empty() {
        log::warn!("{name}: {} duplicate tokens, later lines win", lex.duplicates().len());
    }
    Ok(lex)
}

pub fn load_tweets(ctx: &mut RunContext) -> Result<Vec<TweetRecord>, CliError> {
    let path = required(&ctx.config.inputs.tweets, "tweets")?;
    let bytes = ctx.read_input(&path)?;
    if bytes.iter().all(u8::is_ascii_whitespace) {
        return Ok(Vec::new());
    }
    read_tweets_csv(&bytes[..]).map_err(|e| CliError::from(e).context(&path.display().to_string()))
}

pub fn load_bars(ctx: &mut RunContext) -> Result<Vec<OhlcvBar>, CliError> {
    let path = required(&ctx.config.inputs.stocks, "stocks")?;
    let bytes = ctx.read_input(&path)?;
    read_stock_csv(&bytes[..]).map_err(|e| CliError::from(e).context(&path.display().to_string()))
}

/// Bars grouped by ticker, each group in date order.
pub fn bars_by_ticker(bars: Vec<OhlcvBar>) -> BTreeMap<String, Vec<OhlcvBar>> {
    let mut map: BTreeMap<String, Vec<OhlcvBar>> = BTreeMap::new();
    for b in bars {
        map.entry(b.ticker.clone()).or_default().push(b);
    }
    map
}

/// Tweets of one ticker after the likes filter.
pub fn ticker_tweets(ctx: &RunContext, tweets: &[TweetRecord], ticker: &str) -> Vec<TweetRecord> {
    let own: Vec<TweetRecord> = tweets.iter().filter(|t| t.ticker == ticker).cloned().collect();
    filter_tweets(own, ctx.config.inputs.min_likes).records
}

/// Daily sentiment merged onto the ticker's trading days.
pub fn feature_table(
    ctx: &RunContext,
    bars: &[OhlcvBar],
    tweets: &[TweetRecord],
    lexicon: &Lexicon,
) -> Result<FeatureTable, CliError> {
    let scorer = ctx.config.inputs.scorer;
    let scored: Vec<(TweetRecord, f64)> = tweets
        .iter()
        .map(|t| (t.clone(), scorer.score_tweet(&t.text, lexicon)))
        .collect();
    let table = merge(bars, &aggregate_daily(&scored))?;
    if table.sentiment_fill() > 0 {
        log::warn!(
            "{}: {} of {} trading days have no tweets and use neutral sentiment",
            table.ticker(),
            table.sentiment_fill(),
            table.len()
        );
    }
    Ok(table)
}

/// Loads prices, tweets and lexicon and builds one ticker's feature table.
pub fn load_ticker_table(ctx: &mut RunContext, ticker: &str) -> Result<FeatureTable, CliError> {
    let bars = load_bars(ctx)?;
    let tweets = load_tweets(ctx)?;
    let lexicon = load_lexicon(ctx)?;
    let mut grouped = bars_by_ticker(bars);
    let bars = grouped
        .remove(ticker)
        .ok_or_else(|| CliError::Data(format!("ticker {ticker} not found in the price file")))?;
    let tweets = ticker_tweets(ctx, &tweets, ticker);
    if tweets.is_empty() {
        log::warn!("{ticker}: no tweets; sentiment is neutral throughout");
    }
    feature_table(ctx, &bars, &tweets, &lexicon)
}

/// One entry of the comparison grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    Arima,
    Recurrent {
        cell: CellKind,
        layers: usize,
        bidirectional: bool,
    },
    Tuned(CellKind),
    Persistence,
}

pub fn scorer_title(s: Scorer) -> &'static str {
    match s {
        Scorer::Vader => "Vader",
        Scorer::Additive => "Additive",
    }
}

fn cell_name(cell: CellKind) -> &'static str {
    match cell {
        CellKind::Gru => "GRU",
        CellKind::Lstm => "LSTM",
    }
}

impl ModelKind {
    /// Grid order of the comparison tables.
    pub const GRID: [&'static str; 10] = [
        "arima", "lstm-1", "lstm-2", "bilstm", "lstm-tuned", "gru-1", "gru-2", "bigru", "gru-tuned", "persistence",
    ];

    pub fn parse(key: &str) -> Result<Self, CliError> {
        let rec = |cell, layers, bidirectional| ModelKind::Recurrent {
            cell,
            layers,
            bidirectional,
        };
        Ok(match key.trim().to_ascii_lowercase().as_str() {
            "arima" => ModelKind::Arima,
            "persistence" => ModelKind::Persistence,
            "gru-1" | "gru" => rec(CellKind::Gru, 1, false),
            "gru-2" => rec(CellKind::Gru, 2, false),
            "bigru" | "bi-gru" => rec(CellKind::Gru, 1, true),
            "lstm-1" | "lstm" => rec(CellKind::Lstm, 1, false),
            "lstm-2" => rec(CellKind::Lstm, 2, false),
            "bilstm" | "bi-lstm" => rec(CellKind::Lstm, 1, true),
            "gru-tuned" => ModelKind::Tuned(CellKind::Gru),
            "lstm-tuned" => ModelKind::Tuned(CellKind::Lstm),
            other => {
                return Err(CliError::Usage(format!(
                    "unknown model {other:?}; expected one of {}",
                    Self::GRID.join(", ")
                )))
            }
        })
    }

    pub fn key(&self) -> String {
        match *self {
            ModelKind::Arima => "arima".into(),
            ModelKind::Persistence => "persistence".into(),
            ModelKind::Tuned(c) => format!("{c}-tuned"),
            ModelKind::Recurrent {
                cell,
                bidirectional: true,
                ..
            } => format!("bi{cell}"),
            ModelKind::Recurrent { cell, layers, .. } => format!("{cell}-{layers}"),
        }
    }

    /// Row label; `sentiment` names the scorer whose feature was used.
    pub fn label(&self, sentiment: Option<Scorer>) -> String {
        match sentiment {
            Some(s) if *self != ModelKind::Persistence => format!("{self} + {}", scorer_title(s)),
            _ => self.to_string(),
        }
    }

    pub fn spec(&self, units: usize, dropout_rate: f64, input_dim: usize) -> Option<NetworkSpec> {
        let (cell, layers, bidirectional) = match *self {
            ModelKind::Recurrent {
                cell,
                layers,
                bidirectional,
            } => (cell, layers, bidirectional),
            ModelKind::Tuned(cell) => (cell, 1, false),
            _ => return None,
        };
        Some(NetworkSpec {
            cell,
            layers,
            bidirectional,
            units,
            dropout_rate,
            input_dim,
        })
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ModelKind::Arima => f.write_str("ARIMA"),
            ModelKind::Persistence => f.write_str("Persistence"),
            ModelKind::Tuned(c) => write!(f, "{} (Hyperparameter Tuning)", cell_name(c)),
            ModelKind::Recurrent {
                cell,
                layers,
                bidirectional,
            } => {
                let bi = if bidirectional { "Bi-" } else { "" };
                write!(f, "{bi}{} ({layers}_Layer)", cell_name(cell))
            }
        }
    }
}

/// A trained recurrent network and how it got there.
pub struct Trained {
    pub network: Network,
    pub history: TrainHistory,
    pub search: Option<SearchOutcome>,
}

/// Test-split predictions of one model, in USD.
pub struct Evaluation {
    pub predicted: Vec<f64>,
    pub trained: Option<Trained>,
}

pub fn train_config(ctx: &RunContext, learning_rate: Option<f64>) -> TrainConfig {
    let mut c = ctx.config.training.clone();
    if let Some(lr) = learning_rate {
        c.learning_rate = lr;
    }
    c
}

/// Fits `kind` on the training and validation windows and predicts the test
/// split one step ahead.
pub fn evaluate(ctx: &RunContext, kind: ModelKind, data: &PreparedData) -> Result<Evaluation, CliError> {
    let cfg = &ctx.config;
    match kind {
        ModelKind::Persistence => Ok(Evaluation {
            predicted: persistence_walk(&data.test_previous[..1], &data.test_actual)?,
            trained: None,
        }),
        ModelKind::Arima => {
            let test_start = *data
                .test
                .target_rows
                .first()
                .ok_or_else(|| CliError::Data("empty test split".into()))?;
            let prices = data.table.adj_close();
            let sentiment = data.table.sentiment();
            let mut arima = cfg.arima.clone();
            arima.exog_sentiment = data.with_sentiment;
            let exog = arima.exog_sentiment.then_some(&sentiment[..]);
            let walk = forecast_walk(&arima, &prices[..test_start], &data.test_actual, exog)?;
            if walk.nonstationary_fits > 0 {
                log::warn!("ARIMA: {} of {} fits were non-stationary", walk.nonstationary_fits, walk.refits);
            }
            Ok(Evaluation {
                predicted: walk.predictions,
                trained: None,
            })
        }
        ModelKind::Recurrent { .. } => {
            let spec = kind
                .spec(cfg.model.units, cfg.model.dropout_rate, data.feature_count())
                .expect("recurrent kind has a spec");
            let (network, history) = train(&spec, &data.train, &data.val, &cfg.training)?;
            let predicted = data.unscale_prices(&predict_all(&network, &data.test)?);
            Ok(Evaluation {
                predicted,
                trained: Some(Trained {
                    network,
                    history,
                    search: None,
                }),
            })
        }
        ModelKind::Tuned(_) => {
            let template = kind
                .spec(cfg.model.units, cfg.model.dropout_rate, data.feature_count())
                .expect("tuned kind has a spec");
            let rng = SeededRng::new(cfg.training.seed);
            let outcome = random_search(&cfg.search, &template, &data.train, &data.val, &cfg.training, &rng)?;
            let skipped = outcome.trials.iter().filter(|t| t.error.is_some()).count();
            if skipped > 0 {
                log::warn!("{kind}: {skipped} of {} trials failed and were skipped", outcome.trials.len());
            }
            let predicted = data.unscale_prices(&predict_all(&outcome.network, &data.test)?);
            Ok(Evaluation {
                predicted,
                trained: Some(Trained {
                    network: outcome.network.clone(),
                    history: outcome.history.clone(),
                    search: Some(outcome),
                }),
            })
        }
    }
}

pub fn prepare_for(ctx: &RunContext, table: &FeatureTable, with_sentiment: bool) -> Result<PreparedData, CliError> {
    let data = prepare(table, &ctx.config.data, with_sentiment)?;
    for name in data.scaler.degenerate_features() {
        log::warn!("feature {name} is constant on the training rows and scales to 0");
    }
    Ok(data)
}

/// Metrics on the test split with `k` = input feature count.
pub fn metrics(
    ctx: &RunContext,
    data: &PreparedData,
    predicted: &[f64],
    ticker: &str,
    model: &str,
) -> Result<MetricsReport, CliError> {
    let k = if data.with_sentiment { 2 } else { 1 };
    Ok(regression_metrics(&data.test_actual, predicted, k)?.with_metadata(ReportMetadata {
        ticker: ticker.to_string(),
        model: model.to_string(),
        with_sentiment: data.with_sentiment,
        seed: ctx.seed(),
        config_hash: ctx.config.hash(),
    }))
}

/// Checkpoint with everything diagnose needs to rebuild the test split.
pub fn checkpoint(ctx: &RunContext, network: Network, data: &PreparedData, ticker: &str, model: &str) -> Checkpoint {
    let mut ck = Checkpoint::new(network);
    let floats = |v: &[f64]| v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(" ");
    let meta = [
        ("ticker", ticker.to_string()),
        ("model", model.to_string()),
        ("with_sentiment", data.with_sentiment.to_string()),
        ("lookback", ctx.config.data.lookback.to_string()),
        ("train_frac", format!("{:?}", ctx.config.data.train_frac)),
        ("val_frac", format!("{:?}", ctx.config.data.val_frac)),
        ("scaler_names", data.scaler.names.join(",")),
        ("scaler_min", floats(&data.scaler.min)),
        ("scaler_max", floats(&data.scaler.max)),
        ("seed", ctx.seed().to_string()),
        ("config_hash", ctx.config.hash()),
    ];
    for (k, v) in meta {
        ck.metadata.insert(k.to_string(), v);
    }
    ck
}

/// Scaler parameters stored by [`checkpoint`].
pub fn checkpoint_scaler(ck: &Checkpoint) -> Result<ScalerParams, CliError> {
    let get = |k: &str| {
        ck.metadata
            .get(k)
            .ok_or_else(|| CliError::Data(format!("checkpoint metadata lacks {k}")))
    };
    let floats = |k: &str| -> Result<Vec<f64>, CliError> {
        get(k)?
            .split_whitespace()
            .map(|t| t.parse::<f64>().map_err(|_| CliError::Data(format!("checkpoint {k}: bad number {t:?}"))))
            .collect()
    };
    Ok(ScalerParams {
        names: get("scaler_names")?.split(',').map(str::to_string).collect(),
        min: floats("scaler_min")?,
        max: floats("scaler_max")?,
    })
}
