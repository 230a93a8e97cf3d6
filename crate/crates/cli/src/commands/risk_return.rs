use gru_vader_core::eval::risk_return;
use serde::Serialize;

use crate::args::RiskReturnArgs;
use crate::error::CliError;
use crate::pipeline::{bars_by_ticker, load_bars};
use crate::run::{csv_text, num, RunContext, SCHEMA_VERSION};
use crate::svg::Scatter;

#[derive(Serialize)]
struct Row {
    ticker: String,
    expected_return: f64,
    risk: f64,
    n_returns: usize,
}

#[derive(Serialize)]
struct Report {
    schema_version: u32,
    rows: Vec<Row>,
    warnings: Vec<String>,
}

pub fn run(ctx: &mut RunContext, args: &RiskReturnArgs) -> Result<(), CliError> {
    if let Some(p) = &args.stocks {
        ctx.config.inputs.stocks = Some(p.clone());
    }
    let bars = bars_by_ticker(load_bars(ctx)?);
    let mut tickers: Vec<String> = if args.tickers.is_empty() {
        bars.keys().cloned().collect()
    } else {
        args.tickers.iter().map(|t| t.trim().to_string()).collect()
    };
    tickers.sort();
    tickers.dedup();

    let mut rows = Vec::new();
    let mut warnings = Vec::new();
    for t in &tickers {
        let Some(b) = bars.get(t) else {
            warnings.push(format!("{t}: not in the price file, skipped"));
            continue;
        };
        match risk_return(b) {
            Ok(rr) => rows.push(Row {
                ticker: t.clone(),
                expected_return: rr.expected_return,
                risk: rr.risk,
                n_returns: rr.n_returns,
            }),
            Err(e) => warnings.push(format!("{t}: {e}")),
        }
    }
    for w in &warnings {
        log::warn!("{w}");
    }
    if rows.is_empty() {
        return Err(CliError::Data("no ticker had enough price history".into()));
    }

    let csv_rows = rows.iter().map(|r| {
        vec![r.ticker.clone(), num(r.expected_return), num(r.risk), r.n_returns.to_string()]
    });
    ctx.write_output("risk_return.csv", &csv_text(&["ticker", "expected_return", "risk", "n_returns"], csv_rows)?)?;
    if ctx.svg {
        let points: Vec<(f64, f64)> = rows.iter().map(|r| (r.risk, r.expected_return)).collect();
        let labels: Vec<String> = rows.iter().map(|r| r.ticker.clone()).collect();
        let svg = Scatter {
            title: "Risk vs. expected daily return",
            x_label: "risk (std of daily return)",
            y_label: "expected daily return",
            points: &points,
            labels: Some(&labels),
            line: None,
            hline: Some(0.0),
        }
        .render();
        ctx.write_output("risk_return.svg", svg.as_bytes())?;
    }
    println!("{:<8}{:>14}{:>12}", "ticker", "mean return", "risk");
    for r in &rows {
        println!("{:<8}{:>14.6}{:>12.6}", r.ticker, r.expected_return, r.risk);
    }
    let path = ctx.write_json(
        "risk_return.json",
        &Report {
            schema_version: SCHEMA_VERSION,
            rows,
            warnings,
        },
    )?;
    println!("report -> {}", path.display());
    Ok(())
}
