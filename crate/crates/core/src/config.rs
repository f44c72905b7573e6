//! Run configuration read from a TOML file.
//!
//! Every key is optional; command-line flags override the file and the file
//! overrides the built-in defaults.
//!
//! ```toml
//! jobs = 1
//!
//! [corpus]
//! src_lang = "fr"
//! tgt_lang = "en"
//!
//! [tokenizer]
//! mode = "default"        # or "regex" together with `pattern`
//! case_fold = true
//!
//! [index]
//! side = "target"
//! ngram = 1
//! length_slack = 0
//!
//! [split]
//! ratios = "0.7,0.2,0.1"
//! seed = 42
//!
//! [extract]
//! min_fms = 60.0
//!
//! [cbow]
//! dims = 100
//! window = 2
//! epochs = 5
//! learning_rate = 0.05
//! negatives = 5
//! seed = 42
//! min_count = 1
//!
//! [predictor]
//! kind = "external"
//! k = 1
//!
//! [predictor.external]
//! name = "chat"
//! timeout_secs = 60
//! parallelism = 2
//! transport = { kind = "http", url = "http://127.0.0.1:8080", auth_env = "BACKEND_TOKEN" }
//! ```
//!
//! Secrets never live in the file: `auth_env` names the environment
//! variable holding the bearer token.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cbow::CbowHyperparams;
use crate::corpus::{Side, SplitSpec, TokenizerConfig};
use crate::error::{Error, Result};
use crate::index::IndexConfig;
use crate::predictors::ExternalConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CorpusSection {
    pub src_lang: String,
    pub tgt_lang: String,
}

impl Default for CorpusSection {
    fn default() -> Self {
        CorpusSection {
            src_lang: "src".into(),
            tgt_lang: "tgt".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IndexSection {
    pub side: Side,
    pub ngram: u8,
    pub length_slack: u32,
}

impl Default for IndexSection {
    fn default() -> Self {
        let c = IndexConfig::default();
        IndexSection {
            side: Side::Target,
            ngram: c.ngram,
            length_slack: c.length_slack,
        }
    }
}

impl IndexSection {
    pub fn index_config(&self) -> IndexConfig {
        IndexConfig {
            ngram: self.ngram,
            length_slack: self.length_slack,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SplitSection {
    pub ratios: String,
    pub seed: u64,
}

impl Default for SplitSection {
    fn default() -> Self {
        SplitSection {
            ratios: "0.7,0.2,0.1".into(),
            seed: 42,
        }
    }
}

impl SplitSection {
    pub fn spec(&self) -> Result<SplitSpec> {
        SplitSpec::parse_ratios(&self.ratios, self.seed)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExtractSection {
    pub min_fms: f64,
}

impl Default for ExtractSection {
    fn default() -> Self {
        ExtractSection { min_fms: 60.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CbowSection {
    #[serde(flatten)]
    pub hyper: CbowHyperparams,
    pub min_count: u64,
}

impl Default for CbowSection {
    fn default() -> Self {
        CbowSection {
            hyper: CbowHyperparams::default(),
            min_count: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PredictorSection {
    /// unigram, trigram, cbow or external.
    pub kind: Option<String>,
    pub k: usize,
    pub external: Option<ExternalConfig>,
}

impl Default for PredictorSection {
    fn default() -> Self {
        PredictorSection {
            kind: None,
            k: 1,
            external: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub jobs: usize,
    pub corpus: CorpusSection,
    pub tokenizer: TokenizerConfig,
    pub index: IndexSection,
    pub split: SplitSection,
    pub extract: ExtractSection,
    pub cbow: CbowSection,
    pub predictor: PredictorSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            jobs: 1,
            corpus: CorpusSection::default(),
            tokenizer: TokenizerConfig::default(),
            index: IndexSection::default(),
            split: SplitSection::default(),
            extract: ExtractSection::default(),
            cbow: CbowSection::default(),
            predictor: PredictorSection::default(),
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_toml(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<()> {
        if self.jobs == 0 {
            return Err(Error::Config("jobs must be at least 1".into()));
        }
        if !(0.0..=100.0).contains(&self.extract.min_fms) {
            return Err(Error::Config(format!(
                "min_fms must lie in [0, 100], got {}",
                self.extract.min_fms
            )));
        }
        if self.predictor.k == 0 {
            return Err(Error::Config("k must be at least 1".into()));
        }
        self.split.spec()?;
        Ok(())
    }
}
