#![allow(dead_code)]

use std::path::{Path, PathBuf};

use chrono::{Datelike, Days, NaiveDate, Weekday};

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("fixtures").join(name)
}

pub fn workspace_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

/// Runs the CLI in-process and returns its exit code.
pub fn run(args: &[&str]) -> u8 {
    let mut full = vec!["gru-vader"];
    full.extend_from_slice(args);
    gru_vader_cli::run_from(full)
}

pub fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// Small settings so model commands finish in seconds.
pub const FAST_CONFIG: &str = r#"
[inputs]
min_likes = 0

[data]
lookback = 5

[model]
units = 4
dropout_rate = 0.1

[training]
max_epochs = 4
batch_size = 16
learning_rate = 0.01
seed = 11

[search]
units = [3, 5]
trials = 2

[arima]
p = 1
"#;

struct Lcg(u64);

impl Lcg {
    fn next(&mut self) -> f64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (self.0 >> 11) as f64 / (1u64 << 53) as f64
    }
}

const UPBEAT: [&str; 4] = ["great quarter, love it", "strong rally today", "nice win for holders", "excellent news"];
const GLOOMY: [&str; 4] = ["terrible selloff", "awful guidance, sad", "bad day, big loss", "ugly miss"];
const FLAT: [&str; 3] = ["earnings on Thursday", "watching the chart", "volume near average"];

/// Writes `stocks.csv` and `tweets.csv` for tickers AAA and BBB over
/// `days` weekdays, with tweets on every calendar day including weekends.
pub fn synthetic_dataset(dir: &Path, days: usize) -> (PathBuf, PathBuf) {
    let mut rng = Lcg(0x5eed);
    let start = NaiveDate::from_ymd_opt(2022, 1, 3).unwrap();
    let mut stock = String::from("Date,Open,High,Low,Close,Adj Close,Volume,Stock Name\n");
    let mut tweets = String::from("Date,Tweet,Stock Name,Company Name\n");
    for (ticker, base) in [("AAA", 100.0), ("BBB", 20.0)] {
        let mut price: f64 = base;
        let mut date = start;
        let mut weekdays = 0;
        while weekdays < days {
            let mood = rng.next() - 0.5;
            for k in 0..2 {
                let text = if mood > 0.15 {
                    UPBEAT[(rng.next() * 4.0) as usize]
                } else if mood < -0.15 {
                    GLOOMY[(rng.next() * 4.0) as usize]
                } else {
                    FLAT[(rng.next() * 3.0) as usize]
                };
                tweets.push_str(&format!(
                    "{date} {:02}:{:02}:00+00:00,\"${ticker} {text}\",{ticker},{ticker} Corp\n",
                    10 + k,
                    (rng.next() * 59.0) as u32
                ));
            }
            if !matches!(date.weekday(), Weekday::Sat | Weekday::Sun) {
                let change = 0.01 * mood + 0.004 * (rng.next() - 0.5) + 0.0005;
                let open = price;
                price *= 1.0 + change;
                let (hi, lo) = (open.max(price) * 1.004, open.min(price) * 0.996);
                stock.push_str(&format!(
                    "{date},{open:.6},{hi:.6},{lo:.6},{price:.6},{price:.6},{},{ticker}\n",
                    1_000_000 + (rng.next() * 1e5) as u64
                ));
                weekdays += 1;
            }
            date = date + Days::new(1);
        }
    }
    let s = dir.join("stocks.csv");
    let t = dir.join("tweets.csv");
    std::fs::write(&s, stock).unwrap();
    std::fs::write(&t, tweets).unwrap();
    (s, t)
}

pub fn write_config(dir: &Path, text: &str) -> PathBuf {
    let p = dir.join("config.toml");
    std::fs::write(&p, text).unwrap();
    p
}
