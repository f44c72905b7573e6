//! Inverted index over one side of a translation memory.
//!
//! Lookups run in two phases. Candidate generation prunes units that
//! provably cannot reach the score threshold. Verification then computes
//! the exact word-level distance for each survivor. Pruning never drops
//! a qualifying unit, so results equal an exhaustive scan.
//!
//! # Snapshot layout
//!
//! All integers little-endian.
//!
//! ```text
//! magic        8 bytes   "AFTMIDX\0"
//! version      u32       1
//! side         u8        0 = source, 1 = target
//! ngram        u8        n-gram order of the keys
//! slack        u32       length-filter slack in tokens
//! fp_len       u32       byte length of the memory fingerprint
//! fingerprint  fp_len bytes (UTF-8 hex)
//! n_units      u32
//! lengths      n_units x u32
//! n_keys       u32
//! n_keys x {
//!   key_len    u32
//!   key        key_len bytes (UTF-8; n-gram tokens joined by U+001F)
//!   n_postings u32
//!   postings   n_postings x u32, strictly increasing
//! }
//! ```

use std::collections::{BTreeMap, HashMap};
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::alignment::{edit_script, fms_from_distance, word_levenshtein, FuzzyMatch};
use crate::corpus::{Segment, Side, Token, TranslationMemory};
use crate::error::{Error, Result};

pub const SNAPSHOT_MAGIC: &[u8; 8] = b"AFTMIDX\0";
pub const SNAPSHOT_VERSION: u32 = 1;

const KEY_SEP: char = '\u{1f}';

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct IndexConfig {
    pub ngram: u8,
    /// Extra tokens of length difference tolerated by the length filter.
    pub length_slack: u32,
}

impl Default for IndexConfig {
    fn default() -> Self {
        IndexConfig {
            ngram: 1,
            length_slack: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TmIndex {
    side: Side,
    config: IndexConfig,
    postings: BTreeMap<String, Vec<u32>>,
    lengths: Vec<u32>,
    memory_fingerprint: String,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LookupOptions {
    pub min_fms: f64,
    pub k: usize,
    /// Skip units scoring exactly 100.
    pub exclude_exact: bool,
}

impl Default for LookupOptions {
    fn default() -> Self {
        LookupOptions {
            min_fms: 60.0,
            k: 1,
            exclude_exact: false,
        }
    }
}

fn ngram_keys(tokens: &[Token], n: usize) -> Vec<String> {
    if tokens.len() < n {
        return Vec::new();
    }
    tokens
        .windows(n)
        .map(|w| {
            let mut key = String::new();
            for (i, t) in w.iter().enumerate() {
                if i > 0 {
                    key.push(KEY_SEP);
                }
                key.push_str(&t.folded);
            }
            key
        })
        .collect()
}

/// Largest distance `d` for which a pair with longer length `longest`
/// still scores at least `min_fms`, or `None` if even `d = 0` fails.
fn max_distance(longest: usize, min_fms: f64) -> Option<usize> {
    let score = |d: usize| fms_from_distance(d as u32, longest, 0).unwrap_or(0.0);
    if score(0) < min_fms {
        return None;
    }
    let guess = ((longest as f64) * (1.0 - min_fms / 100.0)).floor().max(0.0) as usize;
    let mut d = guess.min(longest);
    while d > 0 && score(d) < min_fms {
        d -= 1;
    }
    while d < longest && score(d + 1) >= min_fms {
        d += 1;
    }
    Some(d)
}

impl TmIndex {
    pub fn build(tm: &TranslationMemory, side: Side, config: IndexConfig) -> Result<Self> {
        if config.ngram == 0 {
            return Err(Error::Index("n-gram order must be at least 1".into()));
        }
        if tm.is_empty() {
            return Err(Error::EmptyMemory);
        }
        let n = config.ngram as usize;
        let mut postings: BTreeMap<String, Vec<u32>> = BTreeMap::new();
        let mut lengths = Vec::with_capacity(tm.len());
        for unit in tm.units() {
            let tokens = &unit.side(side).tokens;
            lengths.push(tokens.len() as u32);
            for key in ngram_keys(tokens, n) {
                let list = postings.entry(key).or_default();
                if list.last() != Some(&unit.id) {
                    list.push(unit.id);
                }
            }
        }
        if lengths.iter().all(|&l| l == 0) {
            return Err(Error::Index(format!("{side} side has no non-empty segments")));
        }
        Ok(TmIndex {
            side,
            config,
            postings,
            lengths,
            memory_fingerprint: tm.fingerprint(),
        })
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn config(&self) -> IndexConfig {
        self.config
    }

    pub fn lengths(&self) -> &[u32] {
        &self.lengths
    }

    pub fn postings(&self) -> &BTreeMap<String, Vec<u32>> {
        &self.postings
    }

    pub fn memory_fingerprint(&self) -> &str {
        &self.memory_fingerprint
    }

    /// Fails unless this index was built from `tm`.
    pub fn check_memory(&self, tm: &TranslationMemory) -> Result<()> {
        let fp = tm.fingerprint();
        if fp != self.memory_fingerprint || tm.len() != self.lengths.len() {
            return Err(Error::Index(format!(
                "index was built for memory {} but got {}",
                self.memory_fingerprint, fp
            )));
        }
        Ok(())
    }

    fn length_ok(&self, lq: usize, lu: usize, min_fms: f64) -> bool {
        let longest = lq.max(lu);
        if longest == 0 {
            return false;
        }
        match max_distance(longest, min_fms) {
            None => false,
            Some(d) => lq.abs_diff(lu) <= d + self.config.length_slack as usize,
        }
    }

    /// Unit ids that may score at least `min_fms` against `query`, ascending.
    /// Every unit that does reach the threshold is included.
    pub fn candidates(&self, query: &Segment, min_fms: f64) -> Vec<u32> {
        let all = 0..self.lengths.len() as u32;
        if min_fms <= 0.0 {
            return all.collect();
        }
        let lq = query.len();
        if lq == 0 {
            return Vec::new();
        }
        let n = self.config.ngram as usize;

        // Per distinct query key: its multiplicity in the query.
        let mut key_counts: HashMap<String, u32> = HashMap::new();
        for k in ngram_keys(&query.tokens, n) {
            *key_counts.entry(k).or_default() += 1;
        }
        // shared[u] bounds from above the number of query key occurrences
        // that can be matched inside unit u.
        let mut shared = vec![0u32; self.lengths.len()];
        for (key, count) in &key_counts {
            if let Some(list) = self.postings.get(key) {
                for &u in list {
                    shared[u as usize] += count;
                }
            }
        }

        if n == 1 {
            // Every Match op pairs one shared token occurrence, so
            // score <= 100 * min(shared, lq, lu) / max(lq, lu).
            all.filter(|&u| {
                let lu = self.lengths[u as usize] as usize;
                let s = shared[u as usize] as usize;
                if s == 0 || !self.length_ok(lq, lu, min_fms) {
                    return false;
                }
                let longest = lq.max(lu);
                let best_matches = s.min(lq).min(lu);
                fms_from_distance((longest - best_matches) as u32, longest, 0)
                    .is_ok_and(|upper| upper >= min_fms)
            })
            .collect()
        } else {
            // q-gram lemma: each edit destroys at most n of the query's
            // lq - n + 1 n-grams.
            all.filter(|&u| {
                let lu = self.lengths[u as usize] as usize;
                if !self.length_ok(lq, lu, min_fms) {
                    return false;
                }
                let Some(d) = max_distance(lq.max(lu), min_fms) else {
                    return false;
                };
                let grams = (lq + 1).saturating_sub(n) as i64;
                let needed = grams - (n * d) as i64;
                i64::from(shared[u as usize]) >= needed
            })
            .collect()
        }
    }

    /// Top `k` units scoring at least `min_fms`, best first, ties by
    /// ascending id.
    pub fn fuzzy_lookup(
        &self,
        tm: &TranslationMemory,
        query: &Segment,
        min_fms: f64,
        k: usize,
    ) -> Vec<FuzzyMatch> {
        self.lookup(
            tm,
            query,
            &LookupOptions {
                min_fms,
                k,
                exclude_exact: false,
            },
        )
    }

    pub fn lookup(&self, tm: &TranslationMemory, query: &Segment, opts: &LookupOptions) -> Vec<FuzzyMatch> {
        if opts.k == 0 || query.is_empty() {
            return Vec::new();
        }
        let mut scored: Vec<(f64, u32)> = self
            .candidates(query, opts.min_fms)
            .into_iter()
            .filter_map(|id| {
                let other = &tm.unit(id)?.side(self.side).tokens;
                let d = word_levenshtein(&query.tokens, other);
                let score = fms_from_distance(d, query.len(), other.len()).ok()?;
                let keep = score >= opts.min_fms && !(opts.exclude_exact && score >= 100.0);
                keep.then_some((score, id))
            })
            .collect();
        scored.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        scored.truncate(opts.k);
        scored
            .into_iter()
            .map(|(score, id)| {
                let other = &tm.units()[id as usize].side(self.side).tokens;
                FuzzyMatch {
                    unit_id: id,
                    fms: score,
                    script: edit_script(&query.tokens, other),
                }
            })
            .collect()
    }

    pub fn write_snapshot<W: Write>(&self, mut out: W) -> Result<()> {
        out.write_all(SNAPSHOT_MAGIC)?;
        out.write_all(&SNAPSHOT_VERSION.to_le_bytes())?;
        out.write_all(&[self.side.as_byte(), self.config.ngram])?;
        out.write_all(&self.config.length_slack.to_le_bytes())?;
        write_bytes(&mut out, self.memory_fingerprint.as_bytes())?;
        write_u32(&mut out, self.lengths.len())?;
        for &l in &self.lengths {
            out.write_all(&l.to_le_bytes())?;
        }
        write_u32(&mut out, self.postings.len())?;
        for (key, list) in &self.postings {
            write_bytes(&mut out, key.as_bytes())?;
            write_u32(&mut out, list.len())?;
            for &id in list {
                out.write_all(&id.to_le_bytes())?;
            }
        }
        out.flush()?;
        Ok(())
    }

    pub fn read_snapshot<R: Read>(mut input: R) -> Result<Self> {
        let mut bytes = Vec::new();
        input.read_to_end(&mut bytes)?;
        let mut r = ByteReader::new(&bytes, "index snapshot");
        if r.take(8).ok().as_deref() != Some(SNAPSHOT_MAGIC.as_slice()) {
            return Err(Error::BadMagic {
                expected: "index snapshot",
            });
        }
        let version = r.u32()?;
        if version != SNAPSHOT_VERSION {
            return Err(Error::Version {
                what: "index snapshot",
                found: version,
                expected: SNAPSHOT_VERSION,
            });
        }
        let side = Side::from_byte(r.u8()?).ok_or_else(|| r.corrupt("bad side byte"))?;
        let ngram = r.u8()?;
        let length_slack = r.u32()?;
        let memory_fingerprint = r.string()?;
        let n_units = r.u32()? as usize;
        let lengths = (0..n_units).map(|_| r.u32()).collect::<Result<Vec<_>>>()?;
        let n_keys = r.u32()? as usize;
        let mut postings = BTreeMap::new();
        for _ in 0..n_keys {
            let key = r.string()?;
            let n = r.u32()? as usize;
            let list = (0..n).map(|_| r.u32()).collect::<Result<Vec<_>>>()?;
            if list.windows(2).any(|w| w[0] >= w[1]) || list.iter().any(|&id| id as usize >= n_units) {
                return Err(r.corrupt("posting list out of order or out of range"));
            }
            postings.insert(key, list);
        }
        if !r.is_done() {
            return Err(r.corrupt("trailing bytes"));
        }
        Ok(TmIndex {
            side,
            config: IndexConfig {
                ngram,
                length_slack,
            },
            postings,
            lengths,
            memory_fingerprint,
        })
    }
}

/// Builds an index over one side of `tm`.
pub fn build_index(tm: &TranslationMemory, side: Side, config: IndexConfig) -> Result<TmIndex> {
    TmIndex::build(tm, side, config)
}

/// Top `k` matches for `query`; see [`TmIndex::fuzzy_lookup`].
pub fn fuzzy_lookup(
    index: &TmIndex,
    tm: &TranslationMemory,
    query: &Segment,
    min_fms: f64,
    k: usize,
) -> Vec<FuzzyMatch> {
    index.fuzzy_lookup(tm, query, min_fms, k)
}

fn write_u32<W: Write>(out: &mut W, v: usize) -> Result<()> {
    let v = u32::try_from(v).map_err(|_| Error::Index("count exceeds u32".into()))?;
    out.write_all(&v.to_le_bytes())?;
    Ok(())
}

fn write_bytes<W: Write>(out: &mut W, b: &[u8]) -> Result<()> {
    write_u32(out, b.len())?;
    out.write_all(b)?;
    Ok(())
}

/// Bounds-checked little-endian cursor shared by the binary formats.
pub(crate) struct ByteReader<'a> {
    bytes: &'a [u8],
    pos: usize,
    what: &'static str,
}

impl<'a> ByteReader<'a> {
    pub(crate) fn new(bytes: &'a [u8], what: &'static str) -> Self {
        ByteReader { bytes, pos: 0, what }
    }

    pub(crate) fn corrupt(&self, message: &str) -> Error {
        Error::Corrupt {
            what: self.what,
            message: format!("{message} (offset {})", self.pos),
        }
    }

    pub(crate) fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.bytes.len())
            .ok_or_else(|| self.corrupt("unexpected end of file"))?;
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    pub(crate) fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    pub(crate) fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    pub(crate) fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    pub(crate) fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    pub(crate) fn string(&mut self) -> Result<String> {
        let n = self.u32()? as usize;
        let b = self.take(n)?;
        String::from_utf8(b.to_vec()).map_err(|_| self.corrupt("invalid UTF-8"))
    }

    pub(crate) fn is_done(&self) -> bool {
        self.pos == self.bytes.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Lang, Tokenizer};

    fn memory(targets: &[&str]) -> TranslationMemory {
        TranslationMemory::from_pairs(
            targets.iter().map(|t| ("x", *t)),
            Lang::new("fr"),
            Lang::new("en"),
            &Tokenizer::default(),
        )
        .unwrap()
    }

    fn query(s: &str) -> Segment {
        Segment::new(s, Lang::new("en"), &Tokenizer::default())
    }

    #[test]
    fn unigram_postings() {
        let tm = memory(&["the red dog", "a red cat", "The dog"]);
        let idx = build_index(&tm, Side::Target, IndexConfig::default()).unwrap();
        assert_eq!(idx.postings()["red"], [0, 1]);
        assert_eq!(idx.postings()["the"], [0, 2]);
        assert_eq!(idx.postings()["dog"], [0, 2]);
        assert_eq!(idx.postings().len(), 5);
        assert_eq!(idx.lengths(), [3, 3, 2]);
    }

    #[test]
    fn repeated_token_posted_once() {
        let tm = memory(&["a a a"]);
        let idx = build_index(&tm, Side::Target, IndexConfig::default()).unwrap();
        assert_eq!(idx.postings()["a"], [0]);
    }

    #[test]
    fn empty_side_unit_kept_in_lengths() {
        let tm = memory(&["one two", "", "three"]);
        let idx = build_index(&tm, Side::Target, IndexConfig::default()).unwrap();
        assert_eq!(idx.lengths(), [2, 0, 1]);
        assert!(idx.postings().values().all(|l| !l.contains(&1)));
    }

    #[test]
    fn all_empty_side_is_an_error() {
        let tm = memory(&["", " "]);
        assert!(build_index(&tm, Side::Target, IndexConfig::default()).is_err());
    }

    #[test]
    fn exact_copy_ranks_first() {
        let tm = memory(&["a b c d", "the red dog", "the brown dog"]);
        let idx = build_index(&tm, Side::Target, IndexConfig::default()).unwrap();
        let res = idx.fuzzy_lookup(&tm, &query("the brown dog"), 60.0, 3);
        assert_eq!(res[0].unit_id, 2);
        assert_eq!(res[0].fms, 100.0);
        assert_eq!(res[1].unit_id, 1);
        assert_eq!(res.len(), 2);
    }

    #[test]
    fn no_shared_tokens_means_no_result() {
        let tm = memory(&["a b c", "d e f"]);
        let idx = build_index(&tm, Side::Target, IndexConfig::default()).unwrap();
        assert!(idx.fuzzy_lookup(&tm, &query("x y z"), 60.0, 5).is_empty());
        assert!(idx.candidates(&query("x y z"), 60.0).is_empty());
    }

    #[test]
    fn zero_threshold_returns_all_candidates() {
        let tm = memory(&["a b c", "d e f", ""]);
        let idx = build_index(&tm, Side::Target, IndexConfig::default()).unwrap();
        assert_eq!(idx.candidates(&query("x"), 0.0), [0, 1, 2]);
    }

    #[test]
    fn ties_by_ascending_id() {
        let tm = memory(&["a b x", "a b y", "a b z"]);
        let idx = build_index(&tm, Side::Target, IndexConfig::default()).unwrap();
        let ids: Vec<u32> = idx
            .fuzzy_lookup(&tm, &query("a b c"), 60.0, 3)
            .iter()
            .map(|m| m.unit_id)
            .collect();
        assert_eq!(ids, [0, 1, 2]);
    }

    #[test]
    fn exclude_exact() {
        let tm = memory(&["a b c", "a b d"]);
        let idx = build_index(&tm, Side::Target, IndexConfig::default()).unwrap();
        let opts = LookupOptions {
            min_fms: 60.0,
            k: 1,
            exclude_exact: true,
        };
        let res = idx.lookup(&tm, &query("a b c"), &opts);
        assert_eq!(res[0].unit_id, 1);
    }

    #[test]
    fn max_distance_matches_formula() {
        assert_eq!(max_distance(3, 60.0), Some(1));
        assert_eq!(max_distance(10, 90.0), Some(1));
        assert_eq!(max_distance(10, 100.0), Some(0));
        assert_eq!(max_distance(4, 0.0), Some(4));
        assert_eq!(max_distance(3, 100.1), None);
    }

    #[test]
    fn snapshot_round_trip() {
        let tm = memory(&["the red dog", "a red cat", ""]);
        let idx = build_index(&tm, Side::Target, IndexConfig { ngram: 2, length_slack: 1 }).unwrap();
        let mut buf = Vec::new();
        idx.write_snapshot(&mut buf).unwrap();
        let back = TmIndex::read_snapshot(buf.as_slice()).unwrap();
        assert_eq!(back, idx);
        back.check_memory(&tm).unwrap();
        assert!(back.check_memory(&memory(&["other"])).is_err());
    }

    #[test]
    fn snapshot_version_mismatch_fails() {
        let tm = memory(&["a"]);
        let idx = build_index(&tm, Side::Target, IndexConfig::default()).unwrap();
        let mut buf = Vec::new();
        idx.write_snapshot(&mut buf).unwrap();
        buf[8] = 9;
        assert!(matches!(
            TmIndex::read_snapshot(buf.as_slice()),
            Err(Error::Version { found: 9, .. })
        ));
        buf[0] = b'X';
        assert!(matches!(
            TmIndex::read_snapshot(buf.as_slice()),
            Err(Error::BadMagic { .. })
        ));
    }

    #[test]
    fn truncated_snapshot_fails() {
        let tm = memory(&["a b"]);
        let idx = build_index(&tm, Side::Target, IndexConfig::default()).unwrap();
        let mut buf = Vec::new();
        idx.write_snapshot(&mut buf).unwrap();
        for cut in [4, 12, buf.len() - 1] {
            assert!(TmIndex::read_snapshot(&buf[..cut]).is_err());
        }
    }
}
