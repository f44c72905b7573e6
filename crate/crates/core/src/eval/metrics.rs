use crate::corpus::{fold_case, Token};
use crate::predictors::PredictionCandidate;

fn lcs_len(a: &[char], b: &[char]) -> usize {
    let mut prev = vec![0usize; b.len() + 1];
    let mut cur = vec![0usize; b.len() + 1];
    for &ca in a {
        for (j, &cb) in b.iter().enumerate() {
            cur[j + 1] = if ca == cb {
                prev[j] + 1
            } else {
                prev[j + 1].max(cur[j])
            };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// Longest common subsequence of the folded character sequences, divided
/// by the longer length. An empty prediction scores 0.
pub fn char_match(predicted: &str, reference: &str) -> f64 {
    let p: Vec<char> = fold_case(predicted).chars().collect();
    let r: Vec<char> = fold_case(reference).chars().collect();
    let longest = p.len().max(r.len());
    if p.is_empty() || longest == 0 {
        return 0.0;
    }
    lcs_len(&p, &r) as f64 / longest as f64
}

/// Top-1 scoring: correct when the first candidate folds to the reference.
pub fn score_hole(candidates: &[PredictionCandidate], reference: &Token) -> (bool, f64) {
    match candidates.first() {
        None => (false, 0.0),
        Some(top) => {
            let correct = fold_case(&top.token) == reference.folded;
            (correct, char_match(&top.token, &reference.surface))
        }
    }
}
