use serde::Serialize;

use crate::args::{CompareArgs, SentimentMode};
use crate::commands::cell;
use crate::error::CliError;
use crate::pipeline::{apply_data_args, evaluate, load_ticker_table, metrics, prepare_for, ModelKind};
use crate::run::{csv_text, num, RunContext, SCHEMA_VERSION};

use super::train::ACCURACY_DEFINITION;

pub const OUTPUT_JSON: &str = "compare.json";
pub const OUTPUT_CSV: &str = "compare.csv";

pub const FOOTER: &str = "GAN (LSTM + CNN) and GAN (GRU + CNN) rows are not produced: GAN models are out of scope for this tool.";

#[derive(Clone, Debug, Serialize)]
pub struct CompareRow {
    pub model: String,
    pub key: String,
    pub with_sentiment: bool,
    pub status: String,
    pub error: Option<String>,
    pub adjusted_r2: Option<f64>,
    pub mae: Option<f64>,
    pub mse: Option<f64>,
    pub accuracy_pct: Option<f64>,
    pub r2: Option<f64>,
    pub n: Option<usize>,
    pub k: Option<usize>,
}

#[derive(Serialize)]
struct CompareReport {
    schema_version: u32,
    ticker: String,
    scorer: String,
    seed: u64,
    config_hash: String,
    accuracy_definition: &'static str,
    test_start: String,
    test_end: String,
    n_test: usize,
    rows: Vec<CompareRow>,
    notes: Vec<&'static str>,
    footer: &'static str,
}

/// Requested models in grid order, without duplicates.
fn selected_models(keys: &[String]) -> Result<Vec<ModelKind>, CliError> {
    let grid: Vec<ModelKind> = ModelKind::GRID.iter().map(|k| ModelKind::parse(k).unwrap()).collect();
    if keys.is_empty() {
        return Ok(grid);
    }
    let wanted = keys.iter().map(|k| ModelKind::parse(k)).collect::<Result<Vec<_>, _>>()?;
    Ok(grid.into_iter().filter(|g| wanted.contains(g)).collect())
}

pub fn run(ctx: &mut RunContext, args: &CompareArgs) -> Result<(), CliError> {
    apply_data_args(ctx, &args.data);
    let models = selected_models(&args.models)?;
    let variants: &[bool] = match args.sentiment {
        SentimentMode::Both => &[false, true],
        SentimentMode::With => &[true],
        SentimentMode::Without => &[false],
    };
    let table = load_ticker_table(ctx, &args.ticker)?;
    let scorer = ctx.config.inputs.scorer;

    let mut rows = Vec::new();
    let mut first_error: Option<CliError> = None;
    let mut test_span = None;
    let mut persistence_done = false;
    for &with_sentiment in variants {
        let data = prepare_for(ctx, &table, with_sentiment)?;
        if test_span.is_none() {
            test_span = Some((data.test_dates.clone(), data.test_actual.len()));
        }
        for &kind in &models {
            if kind == ModelKind::Persistence {
                if persistence_done {
                    continue;
                }
                persistence_done = true;
            }
            let row_sentiment = with_sentiment && kind != ModelKind::Persistence;
            let label = kind.label(row_sentiment.then_some(scorer));
            log::info!("{}: fitting {label}", args.ticker);
            let result = evaluate(ctx, kind, &data).and_then(|e| metrics(ctx, &data, &e.predicted, &args.ticker, &label));
            let mut row = CompareRow {
                model: label.clone(),
                key: kind.key(),
                with_sentiment: row_sentiment,
                status: "ok".into(),
                error: None,
                adjusted_r2: None,
                mae: None,
                mse: None,
                accuracy_pct: None,
                r2: None,
                n: None,
                k: None,
            };
            match result {
                Ok(m) => {
                    row.adjusted_r2 = Some(m.adjusted_r2);
                    row.mae = Some(m.mae);
                    row.mse = Some(m.mse);
                    row.accuracy_pct = Some(m.accuracy_pct);
                    row.r2 = Some(m.r2);
                    row.n = Some(m.n);
                    row.k = Some(m.k);
                }
                Err(e) => {
                    log::error!("{label}: {e}");
                    row.status = "failed".into();
                    row.error = Some(e.to_string());
                    first_error.get_or_insert(e.context(&label));
                }
            }
            rows.push(row);
        }
    }

    let (dates, n_test) = test_span.unwrap_or_default();
    let csv_rows = rows.iter().map(|r| {
        let f = |v: Option<f64>| v.map(num).unwrap_or_default();
        vec![
            r.model.clone(),
            r.with_sentiment.to_string(),
            f(r.adjusted_r2),
            f(r.mae),
            f(r.mse),
            f(r.accuracy_pct),
            r.status.clone(),
        ]
    });
    let bytes = csv_text(
        &["model", "with_sentiment", "adjusted_r2", "mae", "mse", "accuracy_pct", "status"],
        csv_rows,
    )?;
    ctx.write_output(OUTPUT_CSV, &bytes)?;

    let report = CompareReport {
        schema_version: SCHEMA_VERSION,
        ticker: args.ticker.clone(),
        scorer: scorer.to_string(),
        seed: ctx.seed(),
        config_hash: ctx.config.hash(),
        accuracy_definition: ACCURACY_DEFINITION,
        test_start: dates.first().map(|d| d.to_string()).unwrap_or_default(),
        test_end: dates.last().map(|d| d.to_string()).unwrap_or_default(),
        n_test,
        rows,
        notes: vec![
            "metrics are one-step-ahead on the chronological test split, in USD",
            "k in adjusted R² is the input feature count (1 price-only, 2 with sentiment)",
            "tuned models are the best validation trial and are not refit on train + validation",
        ],
        footer: FOOTER,
    };
    let path = ctx.write_json(OUTPUT_JSON, &report)?;

    println!("{} ({} test days, {} to {})", report.ticker, n_test, report.test_start, report.test_end);
    println!("{:<40}{:>12}{:>10}{:>12}{:>10}", "model", "adj. R²", "MAE", "MSE", "accuracy");
    for r in &report.rows {
        println!(
            "{:<40}{:>12}{:>10}{:>12}{:>10}",
            r.model,
            cell(r.adjusted_r2, 2),
            cell(r.mae, 2),
            cell(r.mse, 2),
            r.accuracy_pct.map_or_else(|| r.status.clone(), |a| format!("{a:.2}%"))
        );
    }
    println!("{FOOTER}");
    println!("report -> {}", path.display());
    match first_error {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selection_follows_grid_order() {
        let keys: Vec<String> = ["persistence", "gru-1", "arima", "gru-1"].iter().map(|s| s.to_string()).collect();
        let got: Vec<String> = selected_models(&keys).unwrap().iter().map(|m| m.key()).collect();
        assert_eq!(got, ["arima", "gru-1", "persistence"]);
        assert_eq!(selected_models(&[]).unwrap().len(), ModelKind::GRID.len());
        assert!(selected_models(&["gan".into()]).is_err());
    }
}
