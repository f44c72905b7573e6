//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use anchorfill::corpus::{Lang, Side, SplitRng, Tokenizer, TranslationMemory};

pub const TOY_TSV: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/toy_tm.tsv");
pub const TOY_TMX: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/toy_tm.tmx");

/// Edit distance straight from the recurrence, memoized on (i, j).
pub fn naive_levenshtein<T: PartialEq>(a: &[T], b: &[T]) -> u32 {
    fn go<T: PartialEq>(a: &[T], b: &[T], i: usize, j: usize, memo: &mut HashMap<(usize, usize), u32>) -> u32 {
        if i == 0 {
            return j as u32;
        }
        if j == 0 {
            return i as u32;
        }
        if let Some(&d) = memo.get(&(i, j)) {
            return d;
        }
        let sub = go(a, b, i - 1, j - 1, memo) + u32::from(a[i - 1] != b[j - 1]);
        let del = go(a, b, i - 1, j, memo) + 1;
        let ins = go(a, b, i, j - 1, memo) + 1;
        let d = sub.min(del).min(ins);
        memo.insert((i, j), d);
        d
    }
    go(a, b, a.len(), b.len(), &mut HashMap::new())
}

pub fn naive_fms(a: &[&str], b: &[&str]) -> f64 {
    let l = a.len().max(b.len()) as f64;
    100.0 * (l - naive_levenshtein(a, b) as f64) / l
}

/// Scores every unit and sorts by score descending, then id.
pub fn exhaustive_scan(tm: &TranslationMemory, side: Side, query: &[&str], min_fms: f64, k: usize) -> Vec<(u32, f64)> {
    let mut all: Vec<(u32, f64)> = tm
        .units()
        .iter()
        .filter_map(|u| {
            let other: Vec<&str> = u.side(side).tokens.iter().map(|t| t.folded.as_str()).collect();
            if other.is_empty() && query.is_empty() {
                return None;
            }
            let s = naive_fms(query, &other);
            (s >= min_fms).then_some((u.id, s))
        })
        .collect();
    all.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
    all.truncate(k);
    all
}

/// Random space-joined sentence over `alphabet` with length in `lo..=hi`.
pub fn random_sentence(rng: &mut SplitRng, alphabet: &[&str], lo: usize, hi: usize) -> String {
    let len = lo + rng.below((hi - lo + 1) as u64) as usize;
    (0..len)
        .map(|_| alphabet[rng.below(alphabet.len() as u64) as usize])
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn memory_from_targets(targets: &[String]) -> TranslationMemory {
    TranslationMemory::from_pairs(
        targets.iter().enumerate().map(|(i, t)| (format!("s{i}"), t.as_str())),
        Lang::new("fr"),
        Lang::new("en"),
        &Tokenizer::default(),
    )
    .unwrap()
}

pub fn words(s: &str) -> Vec<&str> {
    s.split_whitespace().collect()
}

/// Longest common subsequence length by exhaustive subsequence search over
/// the shorter string (inputs must be short).
pub fn brute_force_lcs(a: &str, b: &str) -> usize {
    let (a, b): (Vec<char>, Vec<char>) = (a.chars().collect(), b.chars().collect());
    let (short, long) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let is_subseq = |s: &[char]| {
        let mut it = long.iter();
        s.iter().all(|c| it.any(|x| x == c))
    };
    let mut best = 0;
    for mask in 0u32..(1 << short.len()) {
        let sub: Vec<char> = (0..short.len()).filter(|i| mask >> i & 1 == 1).map(|i| short[i]).collect();
        if sub.len() > best && is_subseq(&sub) {
            best = sub.len();
        }
    }
    best
}
