use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A single word-level unit.
///
/// `folded` is what alignment, indexing and prediction compare; `surface`
/// is kept for reporting.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Token {
    pub surface: String,
    pub folded: String,
}

impl Token {
    /// Builds a token, folding case.
    pub fn new(surface: impl Into<String>) -> Self {
        let surface = surface.into();
        let folded = fold_case(&surface);
        Token { surface, folded }
    }

    /// Builds a token whose folded form is the surface form unchanged.
    pub fn verbatim(surface: impl Into<String>) -> Self {
        let surface = surface.into();
        Token {
            folded: surface.clone(),
            surface,
        }
    }
}

/// Simple (one-to-one) lowercase folding. Characters whose lowercase
/// mapping expands to several characters are left unchanged so that the
/// folded form has the same number of scalar values as the surface.
pub fn fold_case(s: &str) -> String {
    s.chars()
        .map(|c| {
            let mut lower = c.to_lowercase();
            match (lower.next(), lower.next()) {
                (Some(l), None) => l,
                _ => c,
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TokenizerMode {
    #[default]
    Default,
    Regex,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct TokenizerConfig {
    pub mode: TokenizerMode,
    /// Token pattern, used only in regex mode.
    pub pattern: Option<String>,
    pub case_fold: bool,
    pub keep_punct: bool,
}

impl Default for TokenizerConfig {
    fn default() -> Self {
        TokenizerConfig {
            mode: TokenizerMode::Default,
            pattern: None,
            case_fold: true,
            keep_punct: true,
        }
    }
}

/// A compiled tokenizer.
///
/// The default mode emits maximal runs of letters and digits (combining
/// marks and word-internal ASCII apostrophes included) and every other
/// non-space character as a token of its own. Typographic apostrophes
/// such as `’` are punctuation. Regex mode emits every match of the
/// configured pattern, split further on whitespace.
#[derive(Debug, Clone)]
pub struct Tokenizer {
    config: TokenizerConfig,
    regex: Option<Regex>,
}

impl Default for Tokenizer {
    fn default() -> Self {
        Tokenizer {
            config: TokenizerConfig::default(),
            regex: None,
        }
    }
}

impl Tokenizer {
    pub fn new(config: TokenizerConfig) -> Result<Self> {
        let regex = match config.mode {
            TokenizerMode::Default => None,
            TokenizerMode::Regex => {
                let pattern = config.pattern.as_deref().ok_or_else(|| {
                    Error::Config("tokenizer mode `regex` requires `pattern`".into())
                })?;
                let re = Regex::new(pattern)
                    .map_err(|e| Error::Config(format!("bad tokenizer pattern: {e}")))?;
                Some(re)
            }
        };
        Ok(Tokenizer { config, regex })
    }

    pub fn config(&self) -> &TokenizerConfig {
        &self.config
    }

    pub fn tokenize(&self, text: &str) -> Vec<Token> {
        let pieces: Vec<&str> = match &self.regex {
            None => split_default(text),
            Some(re) => re
                .find_iter(text)
                .flat_map(|m| m.as_str().split_whitespace())
                .collect(),
        };
        pieces
            .into_iter()
            .filter(|p| self.config.keep_punct || p.chars().any(is_word_char))
            .map(|p| {
                if self.config.case_fold {
                    Token::new(p)
                } else {
                    Token::verbatim(p)
                }
            })
            .collect()
    }
}

/// Tokenizes with the default configuration.
pub fn tokenize(text: &str) -> Vec<Token> {
    Tokenizer::default().tokenize(text)
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || is_combining_mark(c)
}

fn is_combining_mark(c: char) -> bool {
    matches!(c as u32,
        0x0300..=0x036F | 0x1AB0..=0x1AFF | 0x1DC0..=0x1DFF | 0x20D0..=0x20FF | 0xFE20..=0xFE2F)
}

fn split_default(text: &str) -> Vec<&str> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (start, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if is_word_char(c) {
            let mut j = i + 1;
            while j < chars.len() {
                let cj = chars[j].1;
                let internal_apostrophe =
                    cj == '\'' && j + 1 < chars.len() && is_word_char(chars[j + 1].1);
                if is_word_char(cj) || internal_apostrophe {
                    j += 1;
                } else {
                    break;
                }
            }
            let end = chars.get(j).map_or(text.len(), |&(b, _)| b);
            out.push(&text[start..end]);
            i = j;
        } else {
            out.push(&text[start..start + c.len_utf8()]);
            i += 1;
        }
    }
    out
}
