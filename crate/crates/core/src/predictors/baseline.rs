use std::collections::HashMap;

use super::{HoleQuery, Prediction, PredictionCandidate, Predictor};
use crate::alignment::Folded;
use crate::cbow::{predict_center, EmbeddingModel};
use crate::error::Result;

/// Always answers with the most frequent corpus words.
#[derive(Debug, Clone)]
pub struct UnigramPredictor {
    ranked: Vec<(String, u64)>,
}

impl UnigramPredictor {
    pub fn from_corpus<S, T>(corpus: &[S]) -> Self
    where
        S: AsRef<[T]>,
        T: Folded,
    {
        let mut counts: HashMap<&str, u64> = HashMap::new();
        for s in corpus {
            for t in s.as_ref() {
                *counts.entry(t.folded()).or_default() += 1;
            }
        }
        let mut ranked: Vec<(String, u64)> = counts.into_iter().map(|(w, c)| (w.to_string(), c)).collect();
        ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        UnigramPredictor { ranked }
    }
}

impl Predictor for UnigramPredictor {
    fn name(&self) -> &str {
        "unigram"
    }

    fn predict(&self, _query: &HoleQuery, k: usize) -> Result<Prediction> {
        Ok(Prediction::new(
            self.ranked
                .iter()
                .take(k)
                .map(|(w, c)| PredictionCandidate {
                    token: w.clone(),
                    score: *c as f64,
                })
                .collect(),
        ))
    }
}

/// Center-word counts keyed by the (left, right) neighbours.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TrigramTable {
    centers: HashMap<(String, String), HashMap<String, u64>>,
    totals: HashMap<(String, String), u64>,
}

impl TrigramTable {
    pub fn count(&self, left: &str, center: &str, right: &str) -> u64 {
        self.centers
            .get(&(left.to_string(), right.to_string()))
            .and_then(|m| m.get(center))
            .copied()
            .unwrap_or(0)
    }

    pub fn total(&self, left: &str, right: &str) -> u64 {
        self.totals
            .get(&(left.to_string(), right.to_string()))
            .copied()
            .unwrap_or(0)
    }

    /// Number of distinct anchor pairs.
    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(String, String), &HashMap<String, u64>)> {
        self.centers.iter()
    }
}

/// One count per interior position of every sentence.
pub fn build_trigram_table<S, T>(corpus: &[S]) -> TrigramTable
where
    S: AsRef<[T]>,
    T: Folded,
{
    let mut table = TrigramTable::default();
    for s in corpus {
        for w in s.as_ref().windows(3) {
            let key = (w[0].folded().to_string(), w[2].folded().to_string());
            *table
                .centers
                .entry(key.clone())
                .or_default()
                .entry(w[1].folded().to_string())
                .or_default() += 1;
            *table.totals.entry(key).or_default() += 1;
        }
    }
    table
}

/// Centers seen between `left` and `right`, most frequent first, ties in
/// lexicographic order.
pub fn trigram_predict(table: &TrigramTable, left: &str, right: &str, k: usize) -> Vec<PredictionCandidate> {
    let Some(centers) = table.centers.get(&(left.to_string(), right.to_string())) else {
        return Vec::new();
    };
    let mut ranked: Vec<(&String, &u64)> = centers.iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(a.1).then_with(|| a.0.cmp(b.0)));
    ranked
        .into_iter()
        .take(k)
        .map(|(w, &c)| PredictionCandidate {
            token: w.clone(),
            score: c as f64,
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct TrigramPredictor {
    table: TrigramTable,
}

impl TrigramPredictor {
    pub fn new(table: TrigramTable) -> Self {
        TrigramPredictor { table }
    }

    pub fn from_corpus<S, T>(corpus: &[S]) -> Self
    where
        S: AsRef<[T]>,
        T: Folded,
    {
        TrigramPredictor::new(build_trigram_table(corpus))
    }

    pub fn table(&self) -> &TrigramTable {
        &self.table
    }
}

impl Predictor for TrigramPredictor {
    fn name(&self) -> &str {
        "trigram"
    }

    fn predict(&self, query: &HoleQuery, k: usize) -> Result<Prediction> {
        Ok(Prediction::new(trigram_predict(&self.table, &query.left, &query.right, k)))
    }
}

#[derive(Debug, Clone)]
pub struct CbowPredictor {
    model: EmbeddingModel,
}

impl CbowPredictor {
    pub fn new(model: EmbeddingModel) -> Self {
        CbowPredictor { model }
    }

    pub fn model(&self) -> &EmbeddingModel {
        &self.model
    }
}

impl Predictor for CbowPredictor {
    fn name(&self) -> &str {
        "cbow"
    }

    fn predict(&self, query: &HoleQuery, k: usize) -> Result<Prediction> {
        Ok(Prediction::new(
            predict_center(&self.model, &query.left, &query.right, k)
                .into_iter()
                .map(|(token, score)| PredictionCandidate { token, score })
                .collect(),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alignment::{FuzzyBand, HOLE_MARKER};
    use crate::corpus::tokenize;

    fn query(left: &str, right: &str) -> HoleQuery {
        HoleQuery {
            id: 0,
            left: left.into(),
            right: right.into(),
            masked_segment: vec![left.into(), HOLE_MARKER.into(), right.into()],
            hole_index: 1,
            tu_source: String::new(),
            band: FuzzyBand::B60,
        }
    }

    fn words(s: &str) -> Vec<&str> {
        s.split_whitespace().collect()
    }

    #[test]
    fn unigram_always_most_frequent() {
        let corpus = [words("the cat and the dog"), words("the end")];
        let p = UnigramPredictor::from_corpus(&corpus);
        for q in [query("a", "b"), query("x", "y")] {
            let got = p.predict(&q, 1).unwrap();
            assert_eq!(got.candidates.len(), 1);
            assert_eq!(got.candidates[0].token, "the");
        }
    }

    #[test]
    fn table_single_sentence() {
        let t = build_trigram_table(&[words("a b c")]);
        assert_eq!(t.len(), 1);
        assert_eq!(t.count("a", "b", "c"), 1);
        assert_eq!(t.total("a", "c"), 1);
    }

    #[test]
    fn table_repeated_sentence() {
        let t = build_trigram_table(&[words("a b c a b c")]);
        assert_eq!(t.len(), 3);
        assert_eq!(t.count("a", "b", "c"), 2);
        assert_eq!(t.count("c", "a", "b"), 1);
        assert_eq!(t.count("b", "c", "a"), 1);
        assert_eq!(t.total("a", "c"), 2);
    }

    #[test]
    fn oracle_finds_whether() {
        let corpus = [tokenize("In order to assess whether the institution complies")];
        let p = TrigramPredictor::from_corpus(&corpus);
        let got = p.predict(&query("assess", "the"), 3).unwrap();
        assert_eq!(got.candidates[0].token, "whether");
    }

    #[test]
    fn unseen_pair_is_empty() {
        let p = TrigramPredictor::from_corpus(&[words("a b c")]);
        assert!(p.predict(&query("x", "y"), 3).unwrap().candidates.is_empty());
    }

    #[test]
    fn ties_lexicographic() {
        let t = build_trigram_table(&[words("a z c"), words("a y c"), words("a x c"), words("a y c")]);
        let got: Vec<String> = trigram_predict(&t, "a", "c", 5).into_iter().map(|c| c.token).collect();
        assert_eq!(got, ["y", "x", "z"]);
    }
}
