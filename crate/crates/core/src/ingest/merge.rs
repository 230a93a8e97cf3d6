use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::Path;

use chrono::NaiveDate;

use super::columns::{field, line_of, parse_f64, Columns};
use super::stock::{parse_date, OhlcvBar};
use super::tweets::TweetRecord;
use super::IngestError;

/// Mean compound score of one UTC calendar day.
#[derive(Clone, Debug, PartialEq)]
pub struct DailySentiment {
    pub date: NaiveDate,
    pub mean_compound: f64,
    pub tweet_count: u64,
}

/// Groups scored tweets by UTC date. Output is sorted by date and only
/// contains days with at least one tweet.
pub fn aggregate_daily(scored: &[(TweetRecord, f64)]) -> Vec<DailySentiment> {
    let mut days: BTreeMap<NaiveDate, (f64, u64)> = BTreeMap::new();
    for (tweet, compound) in scored {
        let e = days.entry(tweet.utc_date()).or_insert((0.0, 0));
        e.0 += compound;
        e.1 += 1;
    }
    days.into_iter()
        .map(|(date, (sum, n))| DailySentiment {
            date,
            mean_compound: (sum / n as f64).clamp(-1.0, 1.0),
            tweet_count: n,
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct FeatureRow {
    pub date: NaiveDate,
    pub adj_close: f64,
    pub sentiment: f64,
    /// No tweet covered this trading day; `sentiment` is the neutral 0.0.
    pub imputed: bool,
}

/// Per-ticker trading-day table fed to the models.
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureTable {
    ticker: String,
    rows: Vec<FeatureRow>,
}

impl FeatureTable {
    /// Validates strictly increasing dates and finite values.
    pub fn new(ticker: impl Into<String>, rows: Vec<FeatureRow>) -> Result<Self, IngestError> {
        for (i, r) in rows.iter().enumerate() {
            if !r.adj_close.is_finite() || !r.sentiment.is_finite() {
                return Err(IngestError::Invalid(format!("row {i} has a non-finite value")));
            }
            if !(-1.0..=1.0).contains(&r.sentiment) {
                return Err(IngestError::Invalid(format!(
                    "row {i}: sentiment {} outside [-1, 1]",
                    r.sentiment
                )));
            }
            if i > 0 && rows[i - 1].date >= r.date {
                return Err(IngestError::Invalid(format!(
                    "dates not strictly increasing at {}",
                    r.date
                )));
            }
        }
        Ok(Self {
            ticker: ticker.into(),
            rows,
        })
    }

    /// Table from a bare price series on consecutive days, with zero sentiment.
    pub fn from_prices(ticker: &str, start: NaiveDate, prices: &[f64], sentiment: Option<&[f64]>) -> Result<Self, IngestError> {
        if let Some(s) = sentiment {
            if s.len() != prices.len() {
                return Err(IngestError::Invalid("price and sentiment lengths differ".into()));
            }
        }
        let rows = prices
            .iter()
            .enumerate()
            .map(|(i, &p)| FeatureRow {
                date: start + chrono::Days::new(i as u64),
                adj_close: p,
                sentiment: sentiment.map_or(0.0, |s| s[i]),
                imputed: sentiment.is_none(),
            })
            .collect();
        Self::new(ticker, rows)
    }

    pub fn ticker(&self) -> &str {
        &self.ticker
    }

    pub fn rows(&self) -> &[FeatureRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Rows whose sentiment was imputed.
    pub fn sentiment_fill(&self) -> usize {
        self.rows.iter().filter(|r| r.imputed).count()
    }

    pub fn adj_close(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.adj_close).collect()
    }

    pub fn sentiment(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.sentiment).collect()
    }

    pub fn dates(&self) -> Vec<NaiveDate> {
        self.rows.iter().map(|r| r.date).collect()
    }

    /// Contiguous sub-table.
    pub fn slice(&self, range: std::ops::Range<usize>) -> FeatureTable {
        FeatureTable {
            ticker: self.ticker.clone(),
            rows: self.rows[range].to_vec(),
        }
    }

    /// Writes `date,adj_close,sentiment`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<(), IngestError> {
        let wrap = |e: csv::Error| IngestError::Io {
            path: "<feature csv>".into(),
            msg: e.to_string(),
        };
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["date", "adj_close", "sentiment"]).map_err(wrap)?;
        for r in &self.rows {
            w.write_record([r.date.to_string(), r.adj_close.to_string(), r.sentiment.to_string()])
                .map_err(wrap)?;
        }
        w.flush().map_err(|e| IngestError::Io {
            path: "<feature csv>".into(),
            msg: e.to_string(),
        })
    }

    /// Reads a table written by [`write_csv`](Self::write_csv). The imputation
    /// flags are not stored in the file, so every row reads back as covered.
    pub fn read_csv<R: Read>(ticker: &str, reader: R) -> Result<Self, IngestError> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
        let headers = rdr.headers().map_err(IngestError::from_csv)?.clone();
        let cols = Columns::new(&headers);
        let i_date = cols.require(&["date"])?;
        let i_adj = cols.require(&["adj_close"])?;
        let i_sent = cols.require(&["sentiment"])?;
        let mut rows = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(IngestError::from_csv)?;
            let line = line_of(&rec);
            rows.push(FeatureRow {
                date: parse_date(field(&rec, i_date, line)?, line)?,
                adj_close: parse_f64(&rec, i_adj, line, "adj_close")?,
                sentiment: parse_f64(&rec, i_sent, line, "sentiment")?,
                imputed: false,
            });
        }
        Self::new(ticker, rows)
    }

    pub fn load_csv(ticker: &str, path: &Path) -> Result<Self, IngestError> {
        let file = std::fs::File::open(path).map_err(|e| IngestError::io(path, e))?;
        Self::read_csv(ticker, file)
    }
}

/// Aligns daily sentiment with one ticker's trading days.
///
/// Sentiment from days between two trading days (weekends, holidays) rolls
/// forward onto the next trading day as a tweet-count-weighted mean. Days
/// before the first bar or after the last bar have no trading day to land on
/// and are dropped. Trading days with no coverage get 0.0 and are flagged.
pub fn merge(bars: &[OhlcvBar], daily: &[DailySentiment]) -> Result<FeatureTable, IngestError> {
    let first = bars
        .first()
        .ok_or_else(|| IngestError::EmptyInput("no price bars to merge".into()))?;
    if let Some(other) = bars.iter().find(|b| b.ticker != first.ticker) {
        return Err(IngestError::Invalid(format!(
            "merge expects one ticker, got {} and {}",
            first.ticker, other.ticker
        )));
    }
    let mut bars: Vec<&OhlcvBar> = bars.iter().collect();
    bars.sort_by_key(|b| b.date);

    let mut daily: Vec<&DailySentiment> = daily.iter().collect();
    daily.sort_by_key(|d| d.date);

    let mut rows = Vec::with_capacity(bars.len());
    let mut di = 0;
    let mut prev_date: Option<NaiveDate> = None;
    for bar in bars {
        // skip days at or before the previous trading day (only possible before the first bar)
        while di < daily.len() && prev_date.is_none() && daily[di].date < bar.date {
            di += 1;
        }
        let mut weighted = 0.0;
        let mut count = 0u64;
        while di < daily.len() && daily[di].date <= bar.date {
            weighted += daily[di].mean_compound * daily[di].tweet_count as f64;
            count += daily[di].tweet_count;
            di += 1;
        }
        let (sentiment, imputed) = if count == 0 {
            (0.0, true)
        } else {
            ((weighted / count as f64).clamp(-1.0, 1.0), false)
        };
        rows.push(FeatureRow {
            date: bar.date,
            adj_close: bar.adj_close,
            sentiment,
            imputed,
        });
        prev_date = Some(bar.date);
    }
    FeatureTable::new(first.ticker.clone(), rows)
}
