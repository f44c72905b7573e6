//! Word-level edit distance, canonical edit scripts, fuzzy-match scores
//! and anchored-hole extraction.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::corpus::{Segment, Side, Token, TranslationMemory};
use crate::error::{Error, Result};

/// Placeholder written at the hole position of a masked segment. The
/// default tokenizer can never produce it.
pub const HOLE_MARKER: &str = "<hole>";

/// Anything that exposes a case-folded matching form.
pub trait Folded {
    fn folded(&self) -> &str;
}

impl Folded for Token {
    fn folded(&self) -> &str {
        &self.folded
    }
}

impl Folded for str {
    fn folded(&self) -> &str {
        self
    }
}

impl Folded for &str {
    fn folded(&self) -> &str {
        self
    }
}

impl Folded for String {
    fn folded(&self) -> &str {
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EditKind {
    Match,
    Substitute,
    /// A match-side token absent from the query.
    Insert,
    /// A query token absent from the match side.
    Delete,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EditOp {
    pub kind: EditKind,
    pub qpos: Option<u32>,
    pub mpos: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EditScript {
    pub ops: Vec<EditOp>,
    pub cost: u32,
}

impl EditScript {
    /// Applies the script to `a`, producing the match-side sequence using
    /// tokens from `b` for substitutions and insertions.
    pub fn replay<'t, T: Clone>(&self, a: &'t [T], b: &'t [T]) -> Vec<T> {
        self.ops
            .iter()
            .filter_map(|op| match op.kind {
                EditKind::Match => Some(a[op.qpos.unwrap() as usize].clone()),
                EditKind::Substitute | EditKind::Insert => Some(b[op.mpos.unwrap() as usize].clone()),
                EditKind::Delete => None,
            })
            .collect()
    }
}

fn distance_table<A: Folded, B: Folded>(a: &[A], b: &[B]) -> Vec<Vec<u32>> {
    let (n, m) = (a.len(), b.len());
    let mut d = vec![vec![0u32; m + 1]; n + 1];
    for (i, row) in d.iter_mut().enumerate() {
        row[0] = i as u32;
    }
    for j in 0..=m {
        d[0][j] = j as u32;
    }
    for i in 1..=n {
        for j in 1..=m {
            let sub = u32::from(a[i - 1].folded() != b[j - 1].folded());
            d[i][j] = (d[i - 1][j - 1] + sub)
                .min(d[i - 1][j] + 1)
                .min(d[i][j - 1] + 1);
        }
    }
    d
}

/// Unit-cost Levenshtein distance over folded tokens.
pub fn word_levenshtein<A: Folded, B: Folded>(a: &[A], b: &[B]) -> u32 {
    // Two-row variant; the full table is only needed for traceback.
    let m = b.len();
    let mut prev: Vec<u32> = (0..=m as u32).collect();
    let mut cur = vec![0u32; m + 1];
    for (i, ai) in a.iter().enumerate() {
        cur[0] = i as u32 + 1;
        for j in 1..=m {
            let sub = u32::from(ai.folded() != b[j - 1].folded());
            cur[j] = (prev[j - 1] + sub).min(prev[j] + 1).min(cur[j - 1] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[m]
}

/// Cost-optimal alignment of query `a` against match `b`.
///
/// Traceback runs from the bottom-right cell and, among optimal moves,
/// prefers Match, then Substitute, then Delete, then Insert.
pub fn edit_script<A: Folded, B: Folded>(a: &[A], b: &[B]) -> EditScript {
    let d = distance_table(a, b);
    let (mut i, mut j) = (a.len(), b.len());
    let mut ops = Vec::with_capacity(i.max(j));
    while i > 0 || j > 0 {
        let here = d[i][j];
        if i > 0 && j > 0 && a[i - 1].folded() == b[j - 1].folded() && d[i - 1][j - 1] == here {
            ops.push(EditOp {
                kind: EditKind::Match,
                qpos: Some(i as u32 - 1),
                mpos: Some(j as u32 - 1),
            });
            i -= 1;
            j -= 1;
        } else if i > 0 && j > 0 && d[i - 1][j - 1] + 1 == here {
            ops.push(EditOp {
                kind: EditKind::Substitute,
                qpos: Some(i as u32 - 1),
                mpos: Some(j as u32 - 1),
            });
            i -= 1;
            j -= 1;
        } else if i > 0 && d[i - 1][j] + 1 == here {
            ops.push(EditOp {
                kind: EditKind::Delete,
                qpos: Some(i as u32 - 1),
                mpos: None,
            });
            i -= 1;
        } else {
            ops.push(EditOp {
                kind: EditKind::Insert,
                qpos: None,
                mpos: Some(j as u32 - 1),
            });
            j -= 1;
        }
    }
    ops.reverse();
    EditScript {
        ops,
        cost: d[a.len()][b.len()],
    }
}

/// `100 * (L - d) / L` with `L` the longer length.
pub fn fms_from_distance(distance: u32, len_a: usize, len_b: usize) -> Result<f64> {
    let longest = len_a.max(len_b);
    if longest == 0 {
        return Err(Error::EmptyComparison);
    }
    let kept = longest.saturating_sub(distance as usize);
    Ok(100.0 * kept as f64 / longest as f64)
}

/// Fuzzy-match score in percent; 100 exactly when the folded sequences
/// are equal.
pub fn fms<A: Folded, B: Folded>(a: &[A], b: &[B]) -> Result<f64> {
    fms_from_distance(word_levenshtein(a, b), a.len(), b.len())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FuzzyBand {
    #[serde(rename = "60-69")]
    B60,
    #[serde(rename = "70-79")]
    B70,
    #[serde(rename = "80-89")]
    B80,
    #[serde(rename = "90-100")]
    B90,
}

impl FuzzyBand {
    pub const ALL: [FuzzyBand; 4] = [FuzzyBand::B60, FuzzyBand::B70, FuzzyBand::B80, FuzzyBand::B90];

    pub fn label(self) -> &'static str {
        match self {
            FuzzyBand::B60 => "60-69",
            FuzzyBand::B70 => "70-79",
            FuzzyBand::B80 => "80-89",
            FuzzyBand::B90 => "90-100",
        }
    }

    pub fn from_label(label: &str) -> Option<FuzzyBand> {
        FuzzyBand::ALL.into_iter().find(|b| b.label() == label)
    }
}

impl fmt::Display for FuzzyBand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Reporting band for a score, or `None` below 60.
pub fn band_of(fms: f64) -> Option<FuzzyBand> {
    if fms >= 90.0 {
        Some(FuzzyBand::B90)
    } else if fms >= 80.0 {
        Some(FuzzyBand::B80)
    } else if fms >= 70.0 {
        Some(FuzzyBand::B70)
    } else if fms >= 60.0 {
        Some(FuzzyBand::B60)
    } else {
        None
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzyMatch {
    pub unit_id: u32,
    pub fms: f64,
    pub script: EditScript,
}

impl FuzzyMatch {
    pub fn new<A: Folded, B: Folded>(unit_id: u32, query: &[A], other: &[B]) -> Result<Self> {
        let script = edit_script(query, other);
        let fms = fms_from_distance(script.cost, query.len(), other.len())?;
        Ok(FuzzyMatch {
            unit_id,
            fms,
            script,
        })
    }
}

/// A single-word gap flanked by words that match on both sides.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnchoredHole {
    /// Identifier of the query segment (its unit id in the query memory).
    pub query_ref: u32,
    pub unit_id: u32,
    pub fms: f64,
    pub hole_qpos: u32,
    pub left: Token,
    pub right: Token,
    /// The query's word at the hole: the gold answer.
    pub reference: Token,
    /// The word the TM match has at the hole.
    pub matched_center: Token,
    pub band: FuzzyBand,
    pub masked_query: Vec<String>,
    /// The matched unit's other-language side.
    pub tu_source: Segment,
}

/// Extracts every Substitute whose neighbouring script operations are both
/// Matches. `matched.script` must align `query` with side `side` of unit
/// `matched.unit_id`. Mismatches touching an insertion, a deletion, another
/// substitution or a segment edge are discarded. Matches below the lowest
/// band yield nothing.
pub fn extract_anchored_holes(
    query_ref: u32,
    query: &Segment,
    matched: &FuzzyMatch,
    tm: &TranslationMemory,
    side: Side,
) -> Vec<AnchoredHole> {
    let Some(band) = band_of(matched.fms) else {
        return Vec::new();
    };
    let Some(unit) = tm.unit(matched.unit_id) else {
        return Vec::new();
    };
    let other = &unit.side(side).tokens;
    let ops = &matched.script.ops;
    let mut holes = Vec::new();
    for w in ops.windows(3) {
        let [l, c, r] = w else { unreachable!() };
        if l.kind != EditKind::Match || c.kind != EditKind::Substitute || r.kind != EditKind::Match {
            continue;
        }
        let q = c.qpos.unwrap() as usize;
        let m = c.mpos.unwrap() as usize;
        let reference = query.tokens[q].clone();
        let matched_center = other[m].clone();
        debug_assert_ne!(reference.folded, matched_center.folded);
        let masked_query = query
            .tokens
            .iter()
            .enumerate()
            .map(|(i, t)| if i == q { HOLE_MARKER.to_string() } else { t.surface.clone() })
            .collect();
        holes.push(AnchoredHole {
            query_ref,
            unit_id: unit.id,
            fms: matched.fms,
            hole_qpos: q as u32,
            left: query.tokens[q - 1].clone(),
            right: query.tokens[q + 1].clone(),
            reference,
            matched_center,
            band,
            masked_query,
            tu_source: unit.side(side.other()).clone(),
        });
    }
    holes
}
