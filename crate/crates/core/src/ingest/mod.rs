//! Loading, filtering and aligning the price and tweet CSVs into per-ticker
//! daily feature tables.

mod columns;
mod merge;
mod stock;
mod tweets;

use std::path::Path;

use chrono::NaiveDate;
use thiserror::Error;

pub use merge::{aggregate_daily, merge, DailySentiment, FeatureRow, FeatureTable};
pub use stock::{load_stock_csv, read_stock_csv, write_stock_csv, OhlcvBar};
pub use tweets::{
    filter_tweets, load_tweets_csv, read_tweets_csv, write_tweets_csv, FilterOutcome, TweetRecord,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IngestError {
    #[error("{path}: {msg}")]
    Io { path: String, msg: String },
    #[error("missing required column {column:?}")]
    Schema { column: String },
    #[error("line {line}: {msg}")]
    Row { line: u64, msg: String },
    #[error("line {line}: duplicate row for {ticker} on {date}")]
    Duplicate {
        line: u64,
        ticker: String,
        date: NaiveDate,
    },
    #[error("empty input: {0}")]
    EmptyInput(String),
    #[error("invalid feature table: {0}")]
    Invalid(String),
}

impl IngestError {
    pub(crate) fn io(path: &Path, err: impl std::fmt::Display) -> Self {
        IngestError::Io {
            path: path.display().to_string(),
            msg: err.to_string(),
        }
    }

    pub(crate) fn row(line: u64, msg: impl Into<String>) -> Self {
        IngestError::Row {
            line,
            msg: msg.into(),
        }
    }

    pub(crate) fn from_csv(err: csv::Error) -> Self {
        let line = err.position().map(|p| p.line()).unwrap_or(0);
        IngestError::Row {
            line,
            msg: err.to_string(),
        }
    }
}
