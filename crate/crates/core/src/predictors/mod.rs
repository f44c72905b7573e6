//! Center-word predictors behind one interface.

mod baseline;
pub mod echo;
pub mod external;

use serde::{Deserialize, Serialize};

pub use baseline::{
    build_trigram_table, trigram_predict, CbowPredictor, TrigramPredictor, TrigramTable, UnigramPredictor,
};
pub use external::{ExternalConfig, ExternalPredictor, Transport, WireRequest, WireResponse};

use crate::alignment::{AnchoredHole, FuzzyBand, HOLE_MARKER};
use crate::corpus::tokenize;
use crate::error::{Error, Result};

/// What a predictor sees for one hole.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HoleQuery {
    pub id: u64,
    /// Folded left anchor.
    pub left: String,
    /// Folded right anchor.
    pub right: String,
    pub masked_segment: Vec<String>,
    pub hole_index: usize,
    /// The matched unit's other-language segment.
    pub tu_source: String,
    pub band: FuzzyBand,
}

impl HoleQuery {
    pub fn from_hole(id: u64, hole: &AnchoredHole) -> Self {
        HoleQuery {
            id,
            left: hole.left.folded.clone(),
            right: hole.right.folded.clone(),
            masked_segment: hole.masked_query.clone(),
            hole_index: hole.hole_qpos as usize,
            tu_source: hole.tu_source.raw.clone(),
            band: hole.band,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.left.is_empty() || self.right.is_empty() {
            return Err(Error::Predictor(format!("query {}: empty anchor", self.id)));
        }
        let markers = self.masked_segment.iter().filter(|t| *t == HOLE_MARKER).count();
        if markers != 1 || self.masked_segment.get(self.hole_index).map(String::as_str) != Some(HOLE_MARKER) {
            return Err(Error::Predictor(format!(
                "query {}: masked segment must hold exactly one hole marker at index {}",
                self.id, self.hole_index
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionCandidate {
    pub token: String,
    pub score: f64,
}

/// Ranked candidates for one query, best first.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub candidates: Vec<PredictionCandidate>,
    /// Set when a backend answered with several tokens and only the first
    /// was kept.
    #[serde(default)]
    pub flagged_multi_token: bool,
}

impl Prediction {
    pub fn new(candidates: Vec<PredictionCandidate>) -> Self {
        Prediction {
            candidates,
            flagged_multi_token: false,
        }
    }

    pub fn top(&self) -> Option<&PredictionCandidate> {
        self.candidates.first()
    }
}

/// Reduces raw backend answers to single tokens. A multi-token answer keeps
/// its first token and flags the prediction; an answer with no token at all
/// fails the query.
pub fn normalize_candidates(raw: Vec<PredictionCandidate>, k: usize) -> Result<Prediction> {
    let mut out = Prediction::default();
    for c in raw.into_iter().take(k) {
        let toks = tokenize(&c.token);
        match toks.len() {
            0 => {
                return Err(Error::Predictor(format!(
                    "candidate {:?} contains no token",
                    c.token
                )))
            }
            1 => out.candidates.push(PredictionCandidate {
                token: toks[0].surface.clone(),
                score: c.score,
            }),
            _ => {
                out.flagged_multi_token = true;
                out.candidates.push(PredictionCandidate {
                    token: toks[0].surface.clone(),
                    score: c.score,
                });
            }
        }
    }
    Ok(out)
}

pub trait Predictor: Send + Sync {
    fn name(&self) -> &str;

    fn predict(&self, query: &HoleQuery, k: usize) -> Result<Prediction>;

    /// Answers a batch; one result per query, in input order. A failing
    /// query never aborts the others.
    fn predict_batch(&self, queries: &[HoleQuery], k: usize) -> Vec<Result<Prediction>> {
        queries.iter().map(|q| self.predict(q, k)).collect()
    }
}
