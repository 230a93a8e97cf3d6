use std::io::{Read, Write};
use std::path::Path;

use chrono::{DateTime, FixedOffset, NaiveDate, Utc};

use super::columns::{field, line_of, parse_count, Columns};
use super::IngestError;

const TIMESTAMP_FORMATS: &[&str] = &["%Y-%m-%d %H:%M:%S%.f%:z", "%Y-%m-%d %H:%M:%S%.f%z"];

#[derive(Clone, Debug, PartialEq)]
pub struct TweetRecord {
    /// Original offset is kept so the record re-serializes unchanged.
    pub timestamp: DateTime<FixedOffset>,
    pub text: String,
    pub ticker: String,
    pub company: String,
    pub likes: Option<u64>,
}

impl TweetRecord {
    pub fn utc_date(&self) -> NaiveDate {
        self.timestamp.with_timezone(&Utc).date_naive()
    }
}

fn parse_timestamp(raw: &str, line: u64) -> Result<DateTime<FixedOffset>, IngestError> {
    let raw = raw.trim();
    if let Ok(ts) = DateTime::parse_from_rfc3339(raw) {
        return Ok(ts);
    }
    TIMESTAMP_FORMATS
        .iter()
        .find_map(|f| DateTime::parse_from_str(raw, f).ok())
        .ok_or_else(|| {
            IngestError::row(
                line,
                format!("timestamp {raw:?} must look like 2022-09-29 23:41:16+00:00"),
            )
        })
}

pub fn load_tweets_csv(path: &Path) -> Result<Vec<TweetRecord>, IngestError> {
    let file = std::fs::File::open(path).map_err(|e| IngestError::io(path, e))?;
    read_tweets_csv(file)
}

/// Reads tweets in file order. A `likes` column is optional.
pub fn read_tweets_csv<R: Read>(reader: R) -> Result<Vec<TweetRecord>, IngestError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let headers = rdr.headers().map_err(IngestError::from_csv)?.clone();
    let cols = Columns::new(&headers);
    let i_date = cols.require(&["date"])?;
    let i_text = cols.require(&["tweet", "text"])?;
    let i_ticker = cols.require(&["stock name", "ticker"])?;
    let i_company = cols.require(&["company name", "company"])?;
    let i_likes = cols.find(&["likes", "like count", "likes count"]);

    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(IngestError::from_csv)?;
        let line = line_of(&rec);
        let text = field(&rec, i_text, line)?;
        if text.trim().is_empty() {
            return Err(IngestError::row(line, "empty tweet text"));
        }
        let ticker = field(&rec, i_ticker, line)?.trim().to_uppercase();
        if ticker.is_empty() {
            return Err(IngestError::row(line, "empty stock name"));
        }
        let likes = match i_likes {
            Some(i) => {
                let raw = field(&rec, i, line)?;
                if raw.trim().is_empty() {
                    None
                } else {
                    Some(parse_count(raw, line, "likes")?)
                }
            }
            None => None,
        };
        out.push(TweetRecord {
            timestamp: parse_timestamp(field(&rec, i_date, line)?, line)?,
            text: text.to_string(),
            ticker,
            company: field(&rec, i_company, line)?.to_string(),
            likes,
        });
    }
    Ok(out)
}

/// Writes tweets with the original column names; a `Likes` column is added
/// only when some record carries a like count.
pub fn write_tweets_csv<W: Write>(writer: W, tweets: &[TweetRecord]) -> Result<(), IngestError> {
    let wrap = |e: csv::Error| IngestError::Io {
        path: "<tweets csv>".into(),
        msg: e.to_string(),
    };
    let with_likes = tweets.iter().any(|t| t.likes.is_some());
    let mut w = csv::Writer::from_writer(writer);
    let mut header = vec!["Date", "Tweet", "Stock Name", "Company Name"];
    if with_likes {
        header.push("Likes");
    }
    w.write_record(&header).map_err(wrap)?;
    for t in tweets {
        let mut row = vec![
            t.timestamp.format("%Y-%m-%d %H:%M:%S%.f%:z").to_string(),
            t.text.clone(),
            t.ticker.clone(),
            t.company.clone(),
        ];
        if with_likes {
            row.push(t.likes.map(|l| l.to_string()).unwrap_or_default());
        }
        w.write_record(&row).map_err(wrap)?;
    }
    w.flush().map_err(|e| IngestError::Io {
        path: "<tweets csv>".into(),
        msg: e.to_string(),
    })
}

/// Result of [`filter_tweets`].
#[derive(Clone, Debug, PartialEq)]
pub struct FilterOutcome {
    pub records: Vec<TweetRecord>,
    /// No record carried a like count, so nothing was filtered.
    pub likes_missing: bool,
}

/// Keeps tweets with strictly more than `min_likes` likes.
///
/// When no record has a like count the input is returned unchanged with
/// `likes_missing` set. Otherwise records without a count are dropped.
pub fn filter_tweets(records: Vec<TweetRecord>, min_likes: u64) -> FilterOutcome {
    if records.iter().all(|r| r.likes.is_none()) {
        if !records.is_empty() {
            log::warn!("tweets carry no like counts; the likes filter is skipped");
        }
        return FilterOutcome {
            records,
            likes_missing: true,
        };
    }
    FilterOutcome {
        records: records
            .into_iter()
            .filter(|r| r.likes.is_some_and(|l| l > min_likes))
            .collect(),
        likes_missing: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str = "Date,Tweet,Stock Name,Company Name\n";

    #[test]
    fn parses_timezone_tweet_row() {
        let text = format!(
            "{HEADER}2021-09-30 10:22:52+00:00,Why can XPeng P5 deliver outstanding performance?,XPEV,XPeng Inc.\n"
        );
        let t = &read_tweets_csv(text.as_bytes()).unwrap()[0];
        assert_eq!(t.ticker, "XPEV");
        assert_eq!(t.company, "XPeng Inc.");
        assert_eq!(t.likes, None);
        assert_eq!(t.utc_date(), NaiveDate::from_ymd_opt(2021, 9, 30).unwrap());
    }

    #[test]
    fn header_only() {
        assert!(read_tweets_csv(HEADER.as_bytes()).unwrap().is_empty());
    }

    #[test]
    fn offsets_bucket_by_utc_date() {
        let text = format!("{HEADER}2022-01-03 23:30:00-05:00,hi there,KO,Coca-Cola\n");
        let t = &read_tweets_csv(text.as_bytes()).unwrap()[0];
        assert_eq!(t.utc_date(), NaiveDate::from_ymd_opt(2022, 1, 4).unwrap());
    }

    #[test]
    fn timestamp_without_offset_is_rejected() {
        let text = format!("{HEADER}2022-01-03 10:00:00,hi,KO,Coca-Cola\n");
        assert!(matches!(read_tweets_csv(text.as_bytes()), Err(IngestError::Row { line: 2, .. })));
    }

    #[test]
    fn quoted_text_round_trips() {
        let text = format!(
            "{HEADER}2022-01-03 10:00:00+00:00,\"buy, hold\nor \"\"sell\"\"\",KO,\"Coca-Cola, Inc.\"\n"
        );
        let tweets = read_tweets_csv(text.as_bytes()).unwrap();
        assert_eq!(tweets[0].text, "buy, hold\nor \"sell\"");
        let mut buf = Vec::new();
        write_tweets_csv(&mut buf, &tweets).unwrap();
        assert_eq!(read_tweets_csv(buf.as_slice()).unwrap(), tweets);
    }

    #[test]
    fn missing_company_column() {
        let err = read_tweets_csv("Date,Tweet,Stock Name\n".as_bytes()).unwrap_err();
        assert_eq!(err, IngestError::Schema { column: "company name".into() });
    }

    fn with_likes(likes: &[Option<u64>]) -> Vec<TweetRecord> {
        likes
            .iter()
            .enumerate()
            .map(|(i, &l)| TweetRecord {
                timestamp: DateTime::parse_from_rfc3339("2022-01-03T10:00:00+00:00").unwrap(),
                text: format!("tweet {i}"),
                ticker: "TSLA".into(),
                company: "Tesla, Inc.".into(),
                likes: l,
            })
            .collect()
    }

    #[test]
    fn filter_keeps_strictly_more() {
        let out = filter_tweets(with_likes(&[Some(5), Some(10), Some(11)]), 10);
        assert!(!out.likes_missing);
        assert_eq!(out.records.len(), 1);
        assert_eq!(out.records[0].likes, Some(11));
    }

    #[test]
    fn filter_without_likes_is_identity() {
        let input = with_likes(&[None, None]);
        let out = filter_tweets(input.clone(), 10);
        assert!(out.likes_missing);
        assert_eq!(out.records, input);
    }

    #[test]
    fn zero_threshold_keeps_liked() {
        let input = with_likes(&[Some(1), Some(3)]);
        assert_eq!(filter_tweets(input.clone(), 0).records, input);
    }

    #[test]
    fn likes_column_is_read() {
        let text = "date,tweet,stock name,company name,likes\n2022-01-03 10:00:00+00:00,hi,KO,Coke,12\n";
        assert_eq!(read_tweets_csv(text.as_bytes()).unwrap()[0].likes, Some(12));
    }
}
