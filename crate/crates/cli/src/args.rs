use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "gru-vader", version, about = "Tweet sentiment and recurrent-network stock forecasting")]
pub struct Cli {
    /// TOML configuration file.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Overrides `training.seed`.
    #[arg(long, global = true, value_name = "N")]
    pub seed: Option<u64>,
    /// Output directory for reports, checkpoints and the run manifest.
    #[arg(long, global = true, value_name = "DIR", default_value = "out")]
    pub out: PathBuf,
    /// Also write SVG plots.
    #[arg(long, global = true)]
    pub svg: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Score tweets and label them.
    Score(ScoreArgs),
    /// Compare predicted labels against a hand-labelled file.
    EvalLexicon(EvalLexiconArgs),
    /// Per-ticker tweet volume and sentiment/price correlation.
    Correlate(CorrelateArgs),
    /// Mean and standard deviation of daily returns per ticker.
    RiskReturn(RiskReturnArgs),
    /// Train one recurrent model and evaluate it on the test split.
    Train(TrainArgs),
    /// Random search over units, dropout and learning rate.
    Tune(TuneArgs),
    /// Run the model grid with and without sentiment.
    Compare(CompareArgs),
    /// Residual and Q–Q diagnostics for a checkpoint.
    Diagnose(DiagnoseArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Score(_) => "score",
            Command::EvalLexicon(_) => "eval-lexicon",
            Command::Correlate(_) => "correlate",
            Command::RiskReturn(_) => "risk-return",
            Command::Train(_) => "train",
            Command::Tune(_) => "tune",
            Command::Compare(_) => "compare",
            Command::Diagnose(_) => "diagnose",
        }
    }
}

/// Lexicon selection; overrides `[inputs]`.
#[derive(Debug, Clone, Args, Serialize)]
pub struct LexiconArgs {
    #[arg(long, value_name = "PATH")]
    pub lexicon: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub scorer: Option<ScorerArg>,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ScorerArg {
    Vader,
    Additive,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DataArgs {
    /// Daily OHLCV CSV.
    #[arg(long, value_name = "PATH")]
    pub stocks: Option<PathBuf>,
    /// Tweet CSV.
    #[arg(long, value_name = "PATH")]
    pub tweets: Option<PathBuf>,
    #[command(flatten)]
    pub lexicon: LexiconArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ScoreArgs {
    #[arg(long, value_name = "PATH")]
    pub tweets: Option<PathBuf>,
    #[command(flatten)]
    pub lexicon: LexiconArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EvalLexiconArgs {
    /// CSV with `text` and `label` columns.
    #[arg(long, value_name = "PATH")]
    pub labels: PathBuf,
    #[command(flatten)]
    pub lexicon: LexiconArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CorrelateArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Defaults to every ticker in the price file.
    #[arg(long, value_delimiter = ',')]
    pub tickers: Vec<String>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RiskReturnArgs {
    #[arg(long, value_name = "PATH")]
    pub stocks: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    pub tickers: Vec<String>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TrainArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long)]
    pub ticker: String,
    /// One of gru-1, gru-2, bigru, lstm-1, lstm-2, bilstm.
    #[arg(long, default_value = "gru-1")]
    pub model: String,
    #[arg(long)]
    pub with_sentiment: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TuneArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long)]
    pub ticker: String,
    /// gru or lstm.
    #[arg(long, default_value = "gru")]
    pub cell: String,
    #[arg(long)]
    pub with_sentiment: bool,
    /// Overrides `search.trials`.
    #[arg(long)]
    pub trials: Option<usize>,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum SentimentMode {
    Both,
    With,
    Without,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CompareArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long)]
    pub ticker: String,
    /// Comma-separated model keys; defaults to the full grid.
    #[arg(long, value_delimiter = ',')]
    pub models: Vec<String>,
    #[arg(long, value_enum, default_value = "both")]
    pub sentiment: SentimentMode,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DiagnoseArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long, value_name = "PATH")]
    pub checkpoint: PathBuf,
    /// Defaults to the ticker recorded in the checkpoint.
    #[arg(long)]
    pub ticker: Option<String>,
}
