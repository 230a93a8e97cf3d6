use gru_vader_core::eval::pearson;
use serde::Serialize;

use crate::args::CorrelateArgs;
use crate::commands::cell;
use crate::error::CliError;
use crate::pipeline::{apply_data_args, bars_by_ticker, feature_table, load_bars, load_lexicon, load_tweets, ticker_tweets};
use crate::run::{csv_text, num, RunContext, SCHEMA_VERSION};

pub const OUTPUT_JSON: &str = "correlation.json";
pub const OUTPUT_CSV: &str = "correlation.csv";

#[derive(Clone, Debug, Serialize)]
pub struct CorrelationRow {
    pub ticker: String,
    pub tweets: u64,
    pub trading_days: usize,
    /// Trading days with at least one tweet (own or rolled forward).
    pub covered_days: usize,
    pub pearson_r: Option<f64>,
}

#[derive(Serialize)]
struct CorrelationReport {
    schema_version: u32,
    scorer: String,
    method: &'static str,
    rows: Vec<CorrelationRow>,
    warnings: Vec<String>,
}

pub fn run(ctx: &mut RunContext, args: &CorrelateArgs) -> Result<(), CliError> {
    apply_data_args(ctx, &args.data);
    let bars = bars_by_ticker(load_bars(ctx)?);
    let tweets = load_tweets(ctx)?;
    let lexicon = load_lexicon(ctx)?;

    let mut tickers: Vec<String> = if args.tickers.is_empty() {
        bars.keys().cloned().collect()
    } else {
        args.tickers.iter().map(|t| t.trim().to_string()).collect()
    };
    tickers.sort();
    tickers.dedup();

    let mut rows = Vec::new();
    let mut warnings = Vec::new();
    let mut warn = |msg: String| {
        log::warn!("{msg}");
        warnings.push(msg);
    };
    for ticker in &tickers {
        let Some(ticker_bars) = bars.get(ticker) else {
            warn(format!("{ticker}: not in the price file, skipped"));
            continue;
        };
        let own = ticker_tweets(ctx, &tweets, ticker);
        if own.is_empty() {
            warn(format!("{ticker}: no tweets, skipped"));
            continue;
        }
        let table = feature_table(ctx, ticker_bars, &own, &lexicon)?;
        let (x, y): (Vec<f64>, Vec<f64>) = table
            .rows()
            .iter()
            .filter(|r| !r.imputed)
            .map(|r| (r.sentiment, r.adj_close))
            .unzip();
        let pearson_r = match pearson(&x, &y) {
            Ok(r) => Some(r),
            Err(e) => {
                warn(format!("{ticker}: correlation undefined ({e})"));
                None
            }
        };
        rows.push(CorrelationRow {
            ticker: ticker.clone(),
            tweets: own.len() as u64,
            trading_days: table.len(),
            covered_days: x.len(),
            pearson_r,
        });
    }

    let csv_rows = rows.iter().map(|r| {
        vec![
            r.ticker.clone(),
            r.tweets.to_string(),
            r.trading_days.to_string(),
            r.covered_days.to_string(),
            r.pearson_r.map(num).unwrap_or_default(),
        ]
    });
    let bytes = csv_text(&["ticker", "tweets", "trading_days", "covered_days", "pearson_r"], csv_rows)?;
    ctx.write_output(OUTPUT_CSV, &bytes)?;
    let report = CorrelationReport {
        schema_version: SCHEMA_VERSION,
        scorer: ctx.config.inputs.scorer.to_string(),
        method: "pearson r of daily mean compound vs adjusted close over trading days with tweet coverage",
        rows,
        warnings,
    };
    let path = ctx.write_json(OUTPUT_JSON, &report)?;

    println!("{:<8}{:>10}{:>8}{:>10}", "ticker", "tweets", "days", "r");
    for r in &report.rows {
        println!(
            "{:<8}{:>10}{:>8}{:>10}",
            r.ticker,
            r.tweets,
            r.covered_days,
            cell(r.pearson_r, 3)
        );
    }
    println!("report -> {}", path.display());
    Ok(())
}
