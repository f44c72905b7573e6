use std::collections::HashMap;

use crate::alignment::Folded;
use crate::error::{Error, Result};

/// Folded-token vocabulary. Ids are assigned by descending corpus count,
/// ties broken by the folded form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocab {
    words: Vec<String>,
    counts: Vec<u64>,
    ids: HashMap<String, u32>,
    min_count: u64,
}

impl Vocab {
    pub(crate) fn from_parts(words: Vec<String>, counts: Vec<u64>, min_count: u64) -> Result<Self> {
        if words.len() != counts.len() {
            return Err(Error::Model("vocabulary words and counts differ in length".into()));
        }
        let mut ids = HashMap::with_capacity(words.len());
        for (i, w) in words.iter().enumerate() {
            if ids.insert(w.clone(), i as u32).is_some() {
                return Err(Error::Model(format!("duplicate vocabulary entry `{w}`")));
            }
        }
        Ok(Vocab {
            words,
            counts,
            ids,
            min_count,
        })
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn id(&self, word: &str) -> Option<u32> {
        self.ids.get(word).copied()
    }

    pub fn word(&self, id: u32) -> &str {
        &self.words[id as usize]
    }

    pub fn count(&self, id: u32) -> u64 {
        self.counts[id as usize]
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn min_count(&self) -> u64 {
        self.min_count
    }
}

pub fn build_vocab<S, T>(corpus: &[S], min_count: u64) -> Result<Vocab>
where
    S: AsRef<[T]>,
    T: Folded,
{
    let mut counts: HashMap<&str, u64> = HashMap::new();
    for sentence in corpus {
        for tok in sentence.as_ref() {
            *counts.entry(tok.folded()).or_default() += 1;
        }
    }
    let mut entries: Vec<(&str, u64)> = counts
        .into_iter()
        .filter(|&(_, c)| c >= min_count.max(1))
        .collect();
    if entries.is_empty() {
        return Err(Error::Model(format!(
            "empty vocabulary (no token occurs at least {min_count} times)"
        )));
    }
    entries.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    let (words, counts): (Vec<String>, Vec<u64>) =
        entries.into_iter().map(|(w, c)| (w.to_string(), c)).unzip();
    Vocab::from_parts(words, counts, min_count)
}
