//! Lexicon-based tweet sentiment: VADER-style rules, a plain additive scorer,
//! and three-way labelling.

mod additive;
mod lexicon;
mod tokenize;
mod vader;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use additive::score_additive;
pub use lexicon::{load_lexicon, load_lexicon_with, DuplicatePolicy, Lexicon};
pub use tokenize::{strip_urls_and_mentions, tokenize};
pub use vader::{
    normalize, punctuation_emphasis, score_vader, BOOSTER_INCREMENT, BUT_AFTER_WEIGHT,
    BUT_BEFORE_WEIGHT, CAPS_INCREMENT, EXCLAMATION_INCREMENT, MAX_EXCLAMATIONS, NEGATION_SCALAR,
    NORMALIZATION_ALPHA,
};

/// Default compound cutoff for the positive class.
pub const DEFAULT_POS_THRESHOLD: f64 = 0.05;
/// Default compound cutoff for the negative class.
pub const DEFAULT_NEG_THRESHOLD: f64 = -0.05;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SentimentError {
    #[error("lexicon i/o: {0}")]
    Io(String),
    #[error("lexicon line {line}: {msg}")]
    LexiconParse { line: usize, msg: String },
    #[error("lexicon line {line}: duplicate token {token:?}")]
    Duplicate { line: usize, token: String },
    #[error("invalid sentiment configuration: {0}")]
    Config(String),
}

/// Valence shares and the normalized compound score.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SentimentScore {
    pub pos: f64,
    pub neg: f64,
    pub neu: f64,
    pub compound: f64,
}

impl SentimentScore {
    pub fn neutral() -> Self {
        Self {
            pos: 0.0,
            neg: 0.0,
            neu: 1.0,
            compound: 0.0,
        }
    }
}

/// Ordered `Negative < Neutral < Positive`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SentimentLabel {
    Negative,
    Neutral,
    Positive,
}

impl SentimentLabel {
    pub const ALL: [SentimentLabel; 3] = [
        SentimentLabel::Positive,
        SentimentLabel::Neutral,
        SentimentLabel::Negative,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SentimentLabel::Positive => "positive",
            SentimentLabel::Neutral => "neutral",
            SentimentLabel::Negative => "negative",
        }
    }
}

impl fmt::Display for SentimentLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SentimentLabel {
    type Err = SentimentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "positive" | "pos" | "1" => Ok(SentimentLabel::Positive),
            "neutral" | "neu" | "0" => Ok(SentimentLabel::Neutral),
            "negative" | "neg" | "-1" => Ok(SentimentLabel::Negative),
            other => Err(SentimentError::Config(format!("unknown label {other:?}"))),
        }
    }
}

/// Three-way label with thresholds inclusive on the non-neutral side.
pub fn classify(
    compound: f64,
    pos_threshold: f64,
    neg_threshold: f64,
) -> Result<SentimentLabel, SentimentError> {
    if !(neg_threshold < pos_threshold) {
        return Err(SentimentError::Config(format!(
            "negative threshold {neg_threshold} must be below positive threshold {pos_threshold}"
        )));
    }
    Ok(if compound >= pos_threshold {
        SentimentLabel::Positive
    } else if compound <= neg_threshold {
        SentimentLabel::Negative
    } else {
        SentimentLabel::Neutral
    })
}

/// Which scorer produces a tweet's compound value.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scorer {
    #[default]
    Vader,
    Additive,
}

impl Scorer {
    /// Compound-like score used for labelling and daily aggregation.
    ///
    /// The additive sum is squashed with the same normalization as VADER so
    /// both scorers share the `[-1, 1]` range and classification thresholds.
    pub fn compound(self, text: &str, lexicon: &Lexicon) -> f64 {
        match self {
            Scorer::Vader => score_vader(text, lexicon).compound,
            Scorer::Additive => normalize(score_additive(text, lexicon), NORMALIZATION_ALPHA),
        }
    }

    /// Scores a raw tweet after dropping links and mentions.
    pub fn score_tweet(self, text: &str, lexicon: &Lexicon) -> f64 {
        self.compound(&strip_urls_and_mentions(text), lexicon)
    }
}

impl fmt::Display for Scorer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scorer::Vader => "vader",
            Scorer::Additive => "additive",
        })
    }
}

impl FromStr for Scorer {
    type Err = SentimentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "vader" => Ok(Scorer::Vader),
            "additive" | "afinn" => Ok(Scorer::Additive),
            other => Err(SentimentError::Config(format!("unknown scorer {other:?}"))),
        }
    }
}
