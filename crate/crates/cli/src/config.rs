use std::path::{Path, PathBuf};

use gru_vader_core::baselines::ArimaConfig;
use gru_vader_core::sentiment::{classify, Scorer, DEFAULT_NEG_THRESHOLD, DEFAULT_POS_THRESHOLD};
use gru_vader_core::training::{DataConfig, SearchSpace, TrainConfig};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;

/// Input files and sentiment settings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InputsConfig {
    pub stocks: Option<PathBuf>,
    pub tweets: Option<PathBuf>,
    /// Defaults to the bundled lexicon matching `scorer`.
    pub lexicon: Option<PathBuf>,
    pub scorer: Scorer,
    /// Tweets with fewer likes are dropped when the file has a likes column.
    pub min_likes: u64,
    pub pos_threshold: f64,
    pub neg_threshold: f64,
}

impl Default for InputsConfig {
    fn default() -> Self {
        Self {
            stocks: None,
            tweets: None,
            lexicon: None,
            scorer: Scorer::Vader,
            min_likes: 10,
            pos_threshold: DEFAULT_POS_THRESHOLD,
            neg_threshold: DEFAULT_NEG_THRESHOLD,
        }
    }
}

/// Architecture settings for the untuned recurrent models.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelConfig {
    pub units: usize,
    pub dropout_rate: f64,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self {
            units: 50,
            dropout_rate: 0.2,
        }
    }
}

/// Everything a run depends on besides its subcommand arguments.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AppConfig {
    pub inputs: InputsConfig,
    pub data: DataConfig,
    pub model: ModelConfig,
    pub training: TrainConfig,
    pub search: SearchSpace,
    pub arima: ArimaConfig,
}

impl AppConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| e.context(&path.display().to_string()))
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Usage(format!("config: {e}")))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.data.validate()?;
        self.training.validate()?;
        self.search.validate()?;
        self.arima.order()?;
        if self.arima.refit_every == 0 {
            return Err(CliError::Usage("arima.refit_every must be at least 1".into()));
        }
        if !(0.0..1.0).contains(&self.model.dropout_rate) || self.model.units == 0 {
            return Err(CliError::Usage("model.units must be positive and model.dropout_rate in [0, 1)".into()));
        }
        classify(0.0, self.inputs.pos_threshold, self.inputs.neg_threshold)?;
        Ok(())
    }

    /// SHA-256 of the TOML snapshot, hex encoded.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_toml().as_bytes()))
    }

    /// The configured lexicon, or the bundled one for the scorer.
    pub fn lexicon_path(&self) -> PathBuf {
        if let Some(p) = &self.inputs.lexicon {
            return p.clone();
        }
        let file = match self.inputs.scorer {
            Scorer::Vader => "vader_lexicon.txt",
            Scorer::Additive => "AFINN-en-165.txt",
        };
        let local = Path::new("data").join("lexicons").join(file);
        if local.exists() {
            return local;
        }
        Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("..")
            .join("..")
            .join("data")
            .join("lexicons")
            .join(file)
    }
}
