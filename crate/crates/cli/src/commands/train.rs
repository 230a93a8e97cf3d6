use gru_vader_core::eval::MetricsReport;
use gru_vader_core::models::CellKind;
use gru_vader_core::training::{HyperParams, PreparedData, TrialResult};
use serde::Serialize;

use crate::args::{TrainArgs, TuneArgs};
use crate::error::CliError;
use crate::pipeline::{
    apply_data_args, checkpoint, evaluate, load_ticker_table, metrics, prepare_for, ModelKind, Trained,
};
use crate::run::{csv_text, num, RunContext, SCHEMA_VERSION};

pub const CHECKPOINT: &str = "checkpoint.ckpt";
pub const METRICS: &str = "metrics.json";
pub const RESIDUALS: &str = "residuals.csv";

pub const ACCURACY_DEFINITION: &str = "100 * (1 - mean(|y - yhat| / |y|)) over test days with y != 0";

#[derive(Serialize)]
struct MetricsFile<'a> {
    schema_version: u32,
    accuracy_definition: &'static str,
    residual_file: &'static str,
    test_start: String,
    test_end: String,
    epochs_run: usize,
    best_val_loss: Option<f64>,
    report: &'a MetricsReport,
}

fn write_model_outputs(
    ctx: &mut RunContext,
    data: &PreparedData,
    predicted: &[f64],
    report: &MetricsReport,
    trained: &Trained,
    ticker: &str,
) -> Result<(), CliError> {
    let ck = checkpoint(ctx, trained.network.clone(), data, ticker, &report.metadata.model);
    ctx.write_output(CHECKPOINT, ck.to_text().as_bytes())?;

    let mut history = Vec::new();
    trained.history.write_csv(&mut history)?;
    ctx.write_output("history.csv", &history)?;

    let rows = (0..predicted.len()).map(|i| {
        vec![
            data.test_dates[i].to_string(),
            num(data.test_actual[i]),
            num(predicted[i]),
            num(data.test_previous[i]),
        ]
    });
    ctx.write_output("predictions.csv", &csv_text(&["date", "actual", "predicted", "previous"], rows)?)?;
    let rows = report
        .residuals
        .iter()
        .enumerate()
        .map(|(i, r)| vec![i.to_string(), data.test_dates[i].to_string(), num(*r)]);
    ctx.write_output(RESIDUALS, &csv_text(&["order", "date", "residual"], rows)?)?;

    let file = MetricsFile {
        schema_version: SCHEMA_VERSION,
        accuracy_definition: ACCURACY_DEFINITION,
        residual_file: RESIDUALS,
        test_start: data.test_dates.first().map(|d| d.to_string()).unwrap_or_default(),
        test_end: data.test_dates.last().map(|d| d.to_string()).unwrap_or_default(),
        epochs_run: trained.history.len(),
        best_val_loss: trained.history.best_val_loss(),
        report,
    };
    ctx.write_json(METRICS, &file)?;
    Ok(())
}

fn print_metrics(report: &MetricsReport) {
    println!(
        "{} on {}: adjusted R² {:.4}  MAE {:.4}  MSE {:.4}  accuracy {:.2}%  (n = {}, k = {})",
        report.metadata.model,
        report.metadata.ticker,
        report.adjusted_r2,
        report.mae,
        report.mse,
        report.accuracy_pct,
        report.n,
        report.k
    );
}

fn sentiment_scorer(ctx: &RunContext, with: bool) -> Option<gru_vader_core::sentiment::Scorer> {
    with.then_some(ctx.config.inputs.scorer)
}

pub fn run_train(ctx: &mut RunContext, args: &TrainArgs) -> Result<(), CliError> {
    apply_data_args(ctx, &args.data);
    let kind = ModelKind::parse(&args.model)?;
    if !matches!(kind, ModelKind::Recurrent { .. }) {
        return Err(CliError::Usage(format!(
            "train handles gru-1, gru-2, bigru, lstm-1, lstm-2 and bilstm; use tune for {} or compare for baselines",
            kind.key()
        )));
    }
    let table = load_ticker_table(ctx, &args.ticker)?;
    let data = prepare_for(ctx, &table, args.with_sentiment)?;
    let label = kind.label(sentiment_scorer(ctx, args.with_sentiment));
    let eval = evaluate(ctx, kind, &data)?;
    let trained = eval.trained.as_ref().expect("recurrent models train");
    let report = metrics(ctx, &data, &eval.predicted, &args.ticker, &label)?;
    write_model_outputs(ctx, &data, &eval.predicted, &report, trained, &args.ticker)?;
    print_metrics(&report);
    println!("outputs -> {}", ctx.out.display());
    Ok(())
}

#[derive(Serialize)]
struct TrialsFile<'a> {
    schema_version: u32,
    model: String,
    best_index: usize,
    best: &'a HyperParams,
    retrained_on_validation: bool,
    trials: &'a [TrialResult],
}

pub fn run_tune(ctx: &mut RunContext, args: &TuneArgs) -> Result<(), CliError> {
    apply_data_args(ctx, &args.data);
    if let Some(t) = args.trials {
        ctx.config.search.trials = t;
        ctx.config.search.validate()?;
    }
    let cell: CellKind = args.cell.parse()?;
    let kind = ModelKind::Tuned(cell);
    let table = load_ticker_table(ctx, &args.ticker)?;
    let data = prepare_for(ctx, &table, args.with_sentiment)?;
    let label = kind.label(sentiment_scorer(ctx, args.with_sentiment));
    let eval = evaluate(ctx, kind, &data)?;
    let trained = eval.trained.as_ref().expect("tuned models train");
    let search = trained.search.as_ref().expect("tuned models search");

    ctx.write_json(
        "trials.json",
        &TrialsFile {
            schema_version: SCHEMA_VERSION,
            model: label.clone(),
            best_index: search.best_index,
            best: &search.best,
            retrained_on_validation: false,
            trials: &search.trials,
        },
    )?;
    let report = metrics(ctx, &data, &eval.predicted, &args.ticker, &label)?;
    write_model_outputs(ctx, &data, &eval.predicted, &report, trained, &args.ticker)?;

    println!("{:>5}{:>8}{:>10}{:>12}{:>14}", "trial", "units", "dropout", "lr", "val loss");
    for t in &search.trials {
        println!(
            "{:>5}{:>8}{:>10.3}{:>12.2e}{:>14}",
            t.index,
            t.params.units,
            t.params.dropout_rate,
            t.params.learning_rate,
            t.best_val_loss.map_or_else(|| "failed".to_string(), |v| format!("{v:.6}"))
        );
    }
    println!("best trial {}", search.best_index);
    print_metrics(&report);
    Ok(())
}
