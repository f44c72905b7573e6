// Seeded train/dev/test split of the toy memory. The same seed always
// produces the same partition, on every platform.
//
//     cargo run --example split_corpus -- 42

use anchorfill::corpus::{parse_bitext_tsv, split_corpus, Lang, SplitSpec, Splits};

const TOY: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/toy_tm.tsv");

pub fn run(seed: u64) -> anchorfill::Result<Splits> {
    let tm = parse_bitext_tsv(std::fs::File::open(TOY)?, &Lang::new("fr"), &Lang::new("en"))?;
    let spec = SplitSpec::parse_ratios("0.7,0.2,0.1", seed)?;
    let splits = split_corpus(&tm, &spec)?;
    println!(
        "seed {seed}: train {} / dev {} / test {}",
        splits.train.len(),
        splits.dev.len(),
        splits.test.len()
    );
    println!("test ids: {:?}", splits.test_ids);
    Ok(splits)
}

#[allow(dead_code)]
fn main() -> anchorfill::Result<()> {
    let seed = std::env::args().nth(1).map(|s| s.parse().expect("seed must be an integer")).unwrap_or(42);
    run(seed).map(|_| ())
}
