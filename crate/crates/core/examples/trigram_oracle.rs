// The count-based baseline: for a gap between two known words it answers
// with the word most often seen between them.
//
//     cargo run --example trigram_oracle

use anchorfill::alignment::{FuzzyBand, HOLE_MARKER};
use anchorfill::corpus::tokenize;
use anchorfill::predictors::{HoleQuery, Predictor, TrigramPredictor};

pub fn run() -> anchorfill::Result<Vec<String>> {
    let text = [
        "in order to assess whether the institution complies",
        "it is necessary to assess whether the aid is compatible",
        "the member states shall assess the risk",
    ];
    let corpus: Vec<_> = text.iter().map(|s| tokenize(s)).collect();
    let oracle = TrigramPredictor::from_corpus(&corpus);
    println!("{} anchor pairs", oracle.table().len());

    let mut answers = Vec::new();
    for (left, right) in [("assess", "the"), ("to", "whether"), ("states", "assess"), ("foo", "bar")] {
        let q = HoleQuery {
            id: 0,
            left: left.into(),
            right: right.into(),
            masked_segment: vec![left.into(), HOLE_MARKER.into(), right.into()],
            hole_index: 1,
            tu_source: String::new(),
            band: FuzzyBand::B90,
        };
        let p = oracle.predict(&q, 3)?;
        let shown: Vec<String> = p.candidates.iter().map(|c| format!("{} ({})", c.token, c.score)).collect();
        println!("{left} ___ {right}: {}", if shown.is_empty() { "-".into() } else { shown.join(", ") });
        answers.push(p.top().map(|c| c.token.clone()).unwrap_or_default());
    }
    Ok(answers)
}

#[allow(dead_code)]
fn main() -> anchorfill::Result<()> {
    run().map(|_| ())
}
