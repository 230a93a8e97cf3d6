use std::collections::HashSet;
use std::io::{Read, Write};
use std::path::Path;

use chrono::NaiveDate;

use super::columns::{field, line_of, parse_count, parse_f64, Columns};
use super::IngestError;

/// Relative slack allowed when checking `low ≤ open, close ≤ high`; vendor
/// files round prices to six decimals.
const OHLC_SLACK: f64 = 1e-6;

/// One trading day for one ticker.
#[derive(Clone, Debug, PartialEq)]
pub struct OhlcvBar {
    pub date: NaiveDate,
    pub open: f64,
    pub high: f64,
    pub low: f64,
    pub close: f64,
    pub adj_close: f64,
    pub volume: u64,
    pub ticker: String,
}

impl OhlcvBar {
    fn validate(&self) -> Result<(), String> {
        for (name, v) in [
            ("open", self.open),
            ("high", self.high),
            ("low", self.low),
            ("close", self.close),
            ("adj_close", self.adj_close),
        ] {
            if !(v > 0.0) {
                return Err(format!("{name} must be positive, got {v}"));
            }
        }
        let slack = OHLC_SLACK * self.high.abs().max(1.0);
        if self.low > self.open.min(self.close) + slack {
            return Err(format!("low {} exceeds min(open, close)", self.low));
        }
        if self.high + slack < self.open.max(self.close) {
            return Err(format!("high {} is below max(open, close)", self.high));
        }
        Ok(())
    }
}

pub(crate) fn parse_date(raw: &str, line: u64) -> Result<NaiveDate, IngestError> {
    let raw = raw.trim();
    // accept "2021-09-30" as well as a timestamp whose date part comes first
    let date_part = raw.split(|c| c == ' ' || c == 'T').next().unwrap_or(raw);
    NaiveDate::parse_from_str(date_part, "%Y-%m-%d")
        .map_err(|e| IngestError::row(line, format!("date {raw:?}: {e}")))
}

/// Loads the price CSV. Output is sorted by ticker, then date.
pub fn load_stock_csv(path: &Path) -> Result<Vec<OhlcvBar>, IngestError> {
    let file = std::fs::File::open(path).map_err(|e| IngestError::io(path, e))?;
    read_stock_csv(file)
}

pub fn read_stock_csv<R: Read>(reader: R) -> Result<Vec<OhlcvBar>, IngestError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let headers = rdr.headers().map_err(IngestError::from_csv)?.clone();
    let cols = Columns::new(&headers);
    let i_date = cols.require(&["date"])?;
    let i_open = cols.require(&["open"])?;
    let i_high = cols.require(&["high"])?;
    let i_low = cols.require(&["low"])?;
    let i_close = cols.require(&["close"])?;
    let i_adj = cols.require(&["adj close", "adjusted close"])?;
    let i_vol = cols.require(&["volume"])?;
    let i_ticker = cols.require(&["stock name", "ticker", "symbol"])?;

    let mut bars = Vec::new();
    let mut seen: HashSet<(String, NaiveDate)> = HashSet::new();
    for rec in rdr.records() {
        let rec = rec.map_err(IngestError::from_csv)?;
        let line = line_of(&rec);
        let ticker = field(&rec, i_ticker, line)?.trim().to_uppercase();
        if ticker.is_empty() {
            return Err(IngestError::row(line, "empty stock name"));
        }
        let bar = OhlcvBar {
            date: parse_date(field(&rec, i_date, line)?, line)?,
            open: parse_f64(&rec, i_open, line, "open")?,
            high: parse_f64(&rec, i_high, line, "high")?,
            low: parse_f64(&rec, i_low, line, "low")?,
            close: parse_f64(&rec, i_close, line, "close")?,
            adj_close: parse_f64(&rec, i_adj, line, "adj close")?,
            volume: parse_count(field(&rec, i_vol, line)?, line, "volume")?,
            ticker,
        };
        bar.validate().map_err(|m| IngestError::row(line, m))?;
        if !seen.insert((bar.ticker.clone(), bar.date)) {
            return Err(IngestError::Duplicate {
                line,
                ticker: bar.ticker,
                date: bar.date,
            });
        }
        bars.push(bar);
    }
    bars.sort_by(|a, b| a.ticker.cmp(&b.ticker).then(a.date.cmp(&b.date)));
    Ok(bars)
}

/// Writes bars with the original column names.
pub fn write_stock_csv<W: Write>(writer: W, bars: &[OhlcvBar]) -> Result<(), IngestError> {
    let mut w = csv::Writer::from_writer(writer);
    let wrap = |e: csv::Error| IngestError::Io {
        path: "<stock csv>".into(),
        msg: e.to_string(),
    };
    w.write_record(["Date", "Open", "High", "Low", "Close", "Adj Close", "Volume", "Stock Name"])
        .map_err(wrap)?;
    for b in bars {
        w.write_record([
            b.date.to_string(),
            b.open.to_string(),
            b.high.to_string(),
            b.low.to_string(),
            b.close.to_string(),
            b.adj_close.to_string(),
            b.volume.to_string(),
            b.ticker.clone(),
        ])
        .map_err(wrap)?;
    }
    w.flush().map_err(|e| IngestError::Io {
        path: "<stock csv>".into(),
        msg: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str = "Date,Open,High,Low,Close,Adj Close,Volume,Stock Name\n";

    #[test]
    fn parses_exported_price_row() {
        let text = format!(
            "{HEADER}2021-09-30,260.333344,263.043335,258.333344,258.493347,258.493347,53868000,TSLA\n"
        );
        let bars = read_stock_csv(text.as_bytes()).unwrap();
        assert_eq!(bars.len(), 1);
        let b = &bars[0];
        assert_eq!(b.date, NaiveDate::from_ymd_opt(2021, 9, 30).unwrap());
        assert_eq!(b.ticker, "TSLA");
        assert_eq!(b.adj_close, 258.493347);
        assert_eq!(b.volume, 53_868_000);
    }

    #[test]
    fn header_only_is_empty() {
        assert!(read_stock_csv(HEADER.as_bytes()).unwrap().is_empty());
    }

    #[test]
    fn columns_are_order_free_and_case_insensitive() {
        let text = "stock name,VOLUME,adj close,close,low,high,open,date\nf,10,2,2,1,3,2,2022-01-03\n";
        let bars = read_stock_csv(text.as_bytes()).unwrap();
        assert_eq!(bars[0].ticker, "F");
        assert_eq!(bars[0].high, 3.0);
    }

    #[test]
    fn missing_column_is_named() {
        let text = "Date,Open,High,Low,Close,Volume,Stock Name\n";
        let err = read_stock_csv(text.as_bytes()).unwrap_err();
        assert_eq!(err, IngestError::Schema { column: "adj close".into() });
    }

    #[test]
    fn bad_number_reports_line() {
        let text = format!("{HEADER}2022-01-03,1,1,1,1,1,5,KO\n2022-01-04,x,1,1,1,1,5,KO\n");
        let err = read_stock_csv(text.as_bytes()).unwrap_err();
        assert!(matches!(err, IngestError::Row { line: 3, .. }), "{err}");
    }

    #[test]
    fn bad_date_reports_line() {
        let text = format!("{HEADER}03/01/2022,1,1,1,1,1,5,KO\n");
        assert!(matches!(read_stock_csv(text.as_bytes()), Err(IngestError::Row { line: 2, .. })));
    }

    #[test]
    fn duplicate_ticker_date() {
        let text = format!("{HEADER}2022-01-03,1,1,1,1,1,5,KO\n2022-01-03,1,1,1,1,1,6,KO\n");
        assert!(matches!(
            read_stock_csv(text.as_bytes()),
            Err(IngestError::Duplicate { line: 3, .. })
        ));
    }

    #[test]
    fn ohlc_invariants_are_enforced() {
        let text = format!("{HEADER}2022-01-03,1,1,2,1,1,5,KO\n");
        assert!(read_stock_csv(text.as_bytes()).is_err());
        let text = format!("{HEADER}2022-01-03,0,1,0,1,1,5,KO\n");
        assert!(read_stock_csv(text.as_bytes()).is_err());
    }

    #[test]
    fn round_trip() {
        let text = format!(
            "{HEADER}2022-01-04,1.5,2.25,1.125,2,2,7,KO\n2022-01-03,10.1,10.3,9.9,10.2,10.0,6,AAPL\n"
        );
        let bars = read_stock_csv(text.as_bytes()).unwrap();
        let mut buf = Vec::new();
        write_stock_csv(&mut buf, &bars).unwrap();
        assert_eq!(read_stock_csv(buf.as_slice()).unwrap(), bars);
    }
}
