// Aligns a sentence with a stored one and lists the single-word gaps whose
// neighbours on both sides agree.
//
//     cargo run --example anchored_holes

use anchorfill::alignment::{edit_script, extract_anchored_holes, AnchoredHole, FuzzyMatch};
use anchorfill::corpus::{Lang, Side, TranslationMemory, Tokenizer};

pub fn run() -> anchorfill::Result<Vec<AnchoredHole>> {
    let tok = Tokenizer::default();
    let tm = TranslationMemory::from_pairs(
        [(
            "afin d'évaluer si l'institution respecte les règles",
            "in order to assess whether the institution complies with the rules",
        )],
        Lang::new("fr"),
        Lang::new("en"),
        &tok,
    )?;
    let query = anchorfill::corpus::Segment::new(
        "in order to verify whether the agency complies with the rules",
        Lang::new("en"),
        &tok,
    );
    let stored = &tm.units()[0].target;

    for op in &edit_script(&query.tokens, &stored.tokens).ops {
        let q = op.qpos.map(|i| query.tokens[i as usize].surface.as_str()).unwrap_or("-");
        let m = op.mpos.map(|i| stored.tokens[i as usize].surface.as_str()).unwrap_or("-");
        println!("{:<10?} {q:>12} {m:>12}", op.kind);
    }

    let matched = FuzzyMatch::new(0, &query.tokens, &stored.tokens)?;
    println!("fuzzy match score {:.2}", matched.fms);
    let holes = extract_anchored_holes(0, &query, &matched, &tm, Side::Target);
    for h in &holes {
        println!(
            "{} [{} -> {}] {}   band {}   masked: {}",
            h.left.surface,
            h.matched_center.surface,
            h.reference.surface,
            h.right.surface,
            h.band,
            h.masked_query.join(" ")
        );
    }
    Ok(holes)
}

#[allow(dead_code)]
fn main() -> anchorfill::Result<()> {
    run().map(|_| ())
}
