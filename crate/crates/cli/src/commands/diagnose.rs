use gru_vader_core::eval::{qq_points, QqSeries};
use gru_vader_core::models::Checkpoint;
use gru_vader_core::training::{predict_all, ScalerParams};
use serde::Serialize;

use crate::args::DiagnoseArgs;
use crate::error::CliError;
use crate::pipeline::{apply_data_args, checkpoint_scaler, load_ticker_table, prepare_for};
use crate::run::{csv_text, num, RunContext, SCHEMA_VERSION};
use crate::svg::Scatter;

pub const RESIDUALS: &str = "residuals.csv";
pub const QQ: &str = "qq.csv";

#[derive(Serialize)]
struct DiagnosticsReport {
    schema_version: u32,
    ticker: String,
    model: String,
    n: usize,
    residual_mean: f64,
    residual_file: &'static str,
    qq_file: Option<&'static str>,
    qq_slope: Option<f64>,
    qq_error: Option<String>,
}

fn meta<'a>(ck: &'a Checkpoint, key: &str) -> Result<&'a str, CliError> {
    ck.metadata
        .get(key)
        .map(String::as_str)
        .ok_or_else(|| CliError::Data(format!("checkpoint metadata lacks {key}")))
}

fn meta_parse<T: std::str::FromStr>(ck: &Checkpoint, key: &str) -> Result<T, CliError> {
    let raw = meta(ck, key)?;
    raw.parse()
        .map_err(|_| CliError::Data(format!("checkpoint metadata {key}: cannot parse {raw:?}")))
}

fn same_scaler(a: &ScalerParams, b: &ScalerParams) -> bool {
    let close = |x: &[f64], y: &[f64]| {
        x.len() == y.len()
            && x.iter().zip(y).all(|(p, q)| (p - q).abs() <= 1e-9 * p.abs().max(q.abs()).max(1.0))
    };
    a.names == b.names && close(&a.min, &b.min) && close(&a.max, &b.max)
}

pub fn run(ctx: &mut RunContext, args: &DiagnoseArgs) -> Result<(), CliError> {
    apply_data_args(ctx, &args.data);
    let text = ctx.read_input_text(&args.checkpoint)?;
    let ck = Checkpoint::parse(&text).map_err(|e| CliError::from(e).context(&args.checkpoint.display().to_string()))?;

    let ticker = match &args.ticker {
        Some(t) => t.clone(),
        None => meta(&ck, "ticker")?.to_string(),
    };
    let model = ck.metadata.get("model").cloned().unwrap_or_else(|| ck.network.spec().cell.to_string());
    let with_sentiment: bool = meta_parse(&ck, "with_sentiment")?;
    ctx.config.data.lookback = meta_parse(&ck, "lookback")?;
    ctx.config.data.train_frac = meta_parse(&ck, "train_frac")?;
    ctx.config.data.val_frac = meta_parse(&ck, "val_frac")?;

    let table = load_ticker_table(ctx, &ticker)?;
    let data = prepare_for(ctx, &table, with_sentiment)?;
    let expected = ck.network.spec().input_dim;
    if expected != data.feature_count() {
        return Err(CliError::Data(format!(
            "checkpoint expects {expected} input features but the data provides {}",
            data.feature_count()
        )));
    }
    if !same_scaler(&checkpoint_scaler(&ck)?, &data.scaler) {
        return Err(CliError::Data(
            "checkpoint scaler does not match the training split of this data".into(),
        ));
    }

    let predicted = data.unscale_prices(&predict_all(&ck.network, &data.test)?);
    let residuals: Vec<f64> = data.test_actual.iter().zip(&predicted).map(|(y, p)| y - p).collect();
    let rows = (0..residuals.len()).map(|i| {
        vec![
            i.to_string(),
            data.test_dates[i].to_string(),
            num(data.test_actual[i]),
            num(predicted[i]),
            num(residuals[i]),
        ]
    });
    ctx.write_output(RESIDUALS, &csv_text(&["order", "date", "actual", "predicted", "residual"], rows)?)?;
    if ctx.svg {
        let points: Vec<(f64, f64)> = residuals.iter().enumerate().map(|(i, r)| (i as f64, *r)).collect();
        let svg = Scatter {
            title: &format!("Residuals: {ticker} {model}"),
            x_label: "test day",
            y_label: "actual − predicted (USD)",
            points: &points,
            labels: None,
            line: None,
            hline: Some(0.0),
        }
        .render();
        ctx.write_output("residuals.svg", svg.as_bytes())?;
    }

    let qq = qq_points(&residuals);
    if let Ok(series) = &qq {
        write_qq(ctx, series, &ticker, &model)?;
    }
    let n = residuals.len();
    let report = DiagnosticsReport {
        schema_version: SCHEMA_VERSION,
        ticker: ticker.clone(),
        model: model.clone(),
        n,
        residual_mean: residuals.iter().sum::<f64>() / n.max(1) as f64,
        residual_file: RESIDUALS,
        qq_file: qq.is_ok().then_some(QQ),
        qq_slope: qq.as_ref().ok().map(QqSeries::slope),
        qq_error: qq.as_ref().err().map(|e| e.to_string()),
    };
    let path = ctx.write_json("diagnostics.json", &report)?;

    println!("{ticker} {model}: {n} test residuals, mean {:.4}", report.residual_mean);
    match qq {
        Ok(series) => {
            println!("Q–Q slope vs normal quantiles {:.4}", series.slope());
            println!("report -> {}", path.display());
            Ok(())
        }
        Err(e) => Err(CliError::from(e).context("Q–Q plot")),
    }
}

fn write_qq(ctx: &mut RunContext, series: &QqSeries, ticker: &str, model: &str) -> Result<(), CliError> {
    let rows = series.points().map(|(x, y)| vec![num(x), num(y)]);
    ctx.write_output(QQ, &csv_text(&["theoretical", "sample"], rows)?)?;
    if ctx.svg {
        let points: Vec<(f64, f64)> = series.points().collect();
        let svg = Scatter {
            title: &format!("Normal Q–Q: {ticker} {model}"),
            x_label: "theoretical quantile",
            y_label: "standardized residual",
            points: &points,
            labels: None,
            line: Some((1.0, 0.0)),
            hline: None,
        }
        .render();
        ctx.write_output("qq.svg", svg.as_bytes())?;
    }
    Ok(())
}
