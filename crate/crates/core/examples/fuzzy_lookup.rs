// Indexes the target side of the bundled toy memory and retrieves the
// closest units for a new sentence.
//
//     cargo run --example fuzzy_lookup

use anchorfill::alignment::band_of;
use anchorfill::corpus::{parse_bitext_tsv, Lang, Segment, Side, Tokenizer};
use anchorfill::index::{build_index, IndexConfig};

const TOY: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/toy_tm.tsv");

pub fn run() -> anchorfill::Result<Vec<(u32, f64)>> {
    let tm = parse_bitext_tsv(std::fs::File::open(TOY)?, &Lang::new("fr"), &Lang::new("en"))?;
    let index = build_index(&tm, Side::Target, IndexConfig::default())?;
    println!("{} units, {} index keys", tm.len(), index.postings().len());

    let query = Segment::new(
        "The committee shall publish its yearly report",
        Lang::new("en"),
        &Tokenizer::default(),
    );
    let matches = index.fuzzy_lookup(&tm, &query, 50.0, 5);
    for m in &matches {
        let unit = tm.unit(m.unit_id).expect("matched id exists");
        let band = band_of(m.fms).map(|b| b.label()).unwrap_or("<60");
        println!("{:6.2}  {:>6}  #{:<4} {}", m.fms, band, m.unit_id, unit.target.raw);
    }
    Ok(matches.iter().map(|m| (m.unit_id, m.fms)).collect())
}

#[allow(dead_code)]
fn main() -> anchorfill::Result<()> {
    run().map(|_| ())
}
