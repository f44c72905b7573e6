//! Bilingual corpora: segments, translation units and memories, plus the
//! readers and the deterministic splitter that produce them.

mod split;
mod tmx;
mod tokenize;
mod tsv;

use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub use split::{split_corpus, SplitRng, SplitSpec, Splits};
pub use tmx::{parse_tmx, parse_tmx_with, ParseReport};
pub use tokenize::{fold_case, tokenize, Token, Tokenizer, TokenizerConfig, TokenizerMode};
pub use tsv::{parse_bitext_tsv, parse_bitext_tsv_with, write_bitext_tsv};

use crate::error::{Error, Result};

/// Language tag such as `en` or `fr`. Compared case-insensitively.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Lang(String);

impl Lang {
    pub fn new(tag: &str) -> Self {
        Lang(tag.trim().to_ascii_lowercase())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// True when `other` names this language, allowing a region suffix
    /// (`en` matches `EN-GB`).
    pub fn matches(&self, other: &str) -> bool {
        let other = other.trim().to_ascii_lowercase();
        other == self.0
            || other
                .strip_prefix(self.0.as_str())
                .is_some_and(|rest| rest.starts_with('-') || rest.starts_with('_'))
    }
}

impl fmt::Display for Lang {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Lang {
    fn from(s: &str) -> Self {
        Lang::new(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub raw: String,
    pub tokens: Vec<Token>,
    pub lang: Lang,
}

impl Segment {
    pub fn new(raw: impl Into<String>, lang: Lang, tokenizer: &Tokenizer) -> Self {
        let raw = raw.into();
        let tokens = tokenizer.tokenize(&raw);
        Segment { raw, tokens, lang }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn folded(&self) -> impl Iterator<Item = &str> {
        self.tokens.iter().map(|t| t.folded.as_str())
    }
}

/// Which side of a translation unit an operation looks at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Source,
    #[default]
    Target,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Source => Side::Target,
            Side::Target => Side::Source,
        }
    }

    pub fn as_byte(self) -> u8 {
        match self {
            Side::Source => 0,
            Side::Target => 1,
        }
    }

    pub fn from_byte(b: u8) -> Option<Side> {
        match b {
            0 => Some(Side::Source),
            1 => Some(Side::Target),
            _ => None,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Source => "source",
            Side::Target => "target",
        })
    }
}

impl std::str::FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "source" | "src" => Ok(Side::Source),
            "target" | "tgt" => Ok(Side::Target),
            other => Err(Error::Config(format!("unknown side `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranslationUnit {
    pub id: u32,
    pub source: Segment,
    pub target: Segment,
}

impl TranslationUnit {
    pub fn side(&self, side: Side) -> &Segment {
        match side {
            Side::Source => &self.source,
            Side::Target => &self.target,
        }
    }
}

/// An ordered collection of translation units with dense ids `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslationMemory {
    units: Vec<TranslationUnit>,
    src_lang: Lang,
    tgt_lang: Lang,
}

impl TranslationMemory {
    /// Builds a memory from `(source, target)` raw text pairs, assigning ids
    /// in order.
    pub fn from_pairs<I, S, T>(
        pairs: I,
        src_lang: Lang,
        tgt_lang: Lang,
        tokenizer: &Tokenizer,
    ) -> Result<Self>
    where
        I: IntoIterator<Item = (S, T)>,
        S: Into<String>,
        T: Into<String>,
    {
        if src_lang == tgt_lang {
            return Err(Error::Config(format!(
                "source and target language are both `{src_lang}`"
            )));
        }
        let units = pairs
            .into_iter()
            .enumerate()
            .map(|(i, (s, t))| TranslationUnit {
                id: i as u32,
                source: Segment::new(s, src_lang.clone(), tokenizer),
                target: Segment::new(t, tgt_lang.clone(), tokenizer),
            })
            .collect();
        Ok(TranslationMemory {
            units,
            src_lang,
            tgt_lang,
        })
    }

    /// Re-numbers `units` densely in the given order.
    pub(crate) fn from_units(
        units: impl IntoIterator<Item = TranslationUnit>,
        src_lang: Lang,
        tgt_lang: Lang,
    ) -> Self {
        let units = units
            .into_iter()
            .enumerate()
            .map(|(i, mut u)| {
                u.id = i as u32;
                u
            })
            .collect();
        TranslationMemory {
            units,
            src_lang,
            tgt_lang,
        }
    }

    pub fn units(&self) -> &[TranslationUnit] {
        &self.units
    }

    pub fn unit(&self, id: u32) -> Option<&TranslationUnit> {
        self.units.get(id as usize)
    }

    pub fn len(&self) -> usize {
        self.units.len()
    }

    pub fn is_empty(&self) -> bool {
        self.units.is_empty()
    }

    pub fn src_lang(&self) -> &Lang {
        &self.src_lang
    }

    pub fn tgt_lang(&self) -> &Lang {
        &self.tgt_lang
    }

    pub fn lang(&self, side: Side) -> &Lang {
        match side {
            Side::Source => &self.src_lang,
            Side::Target => &self.tgt_lang,
        }
    }

    /// SHA-256 over the canonical TSV rendering plus language tags.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.src_lang.as_str());
        h.update([0]);
        h.update(self.tgt_lang.as_str());
        h.update([0]);
        for u in &self.units {
            h.update(u.source.raw.as_bytes());
            h.update([b'\t']);
            h.update(u.target.raw.as_bytes());
            h.update([b'\n']);
        }
        hex::encode(&h.finalize()[..16])
    }

    /// Token lists of one side, for corpus-level consumers (vocabulary,
    /// tri-gram counts, embedding training).
    pub fn side_tokens(&self, side: Side) -> impl Iterator<Item = &[Token]> {
        self.units.iter().map(move |u| u.side(side).tokens.as_slice())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lang_region_match() {
        let en = Lang::new("en");
        assert!(en.matches("EN"));
        assert!(en.matches("en-GB"));
        assert!(!en.matches("eng"));
    }

    #[test]
    fn same_languages_rejected() {
        let r = TranslationMemory::from_pairs(
            [("a", "b")],
            Lang::new("en"),
            Lang::new("en"),
            &Tokenizer::default(),
        );
        assert!(r.is_err());
    }

    #[test]
    fn fingerprint_depends_on_content() {
        let tk = Tokenizer::default();
        let a = TranslationMemory::from_pairs([("a", "b")], "fr".into(), "en".into(), &tk).unwrap();
        let b = TranslationMemory::from_pairs([("a", "c")], "fr".into(), "en".into(), &tk).unwrap();
        assert_ne!(a.fingerprint(), b.fingerprint());
        assert_eq!(a.fingerprint(), a.clone().fingerprint());
    }
}
