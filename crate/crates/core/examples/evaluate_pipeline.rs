// The whole pipeline through the library: parse the toy TMX, split it,
// index the training part, extract anchored holes from the test part,
// score two predictors per fuzzy band and print the tables.
//
//     cargo run --release --example evaluate_pipeline

use anchorfill::cbow::{build_vocab, train_cbow, CbowHyperparams};
use anchorfill::corpus::{parse_tmx, split_corpus, Lang, Side, SplitSpec, Token};
use anchorfill::eval::{build_hole_dataset, evaluate, render_report, EvalReport, ReportFormat};
use anchorfill::index::{build_index, IndexConfig};
use anchorfill::predictors::{CbowPredictor, TrigramPredictor};

const TOY_TMX: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/toy_tm.tmx");

pub fn run() -> anchorfill::Result<Vec<EvalReport>> {
    let tm = parse_tmx(std::fs::File::open(TOY_TMX)?, &Lang::new("fr"), &Lang::new("en"))?;
    let splits = split_corpus(&tm, &SplitSpec::parse_ratios("0.7,0.2,0.1", 42)?)?;
    let index = build_index(&splits.train, Side::Target, IndexConfig::default())?;
    let dataset = build_hole_dataset(&splits.test, &index, &splits.train, 60.0)?;
    println!("{} holes from {} test segments", dataset.holes.len(), splits.test.len());

    let text: Vec<&[Token]> = splits.train.side_tokens(Side::Target).collect();
    let trigram = TrigramPredictor::from_corpus(&text);
    let hyper = CbowHyperparams {
        dims: 50,
        epochs: 20,
        ..Default::default()
    };
    let cbow = CbowPredictor::new(train_cbow(&text, build_vocab(&text, 1)?, hyper)?);

    let reports = vec![
        evaluate(&dataset, &trigram, 1, 1)?.0,
        evaluate(&dataset, &cbow, 1, 1)?.0,
    ];
    println!("{}", render_report(&reports, ReportFormat::Markdown));
    print!("{}", render_report(&reports, ReportFormat::PlotData));
    Ok(reports)
}

#[allow(dead_code)]
fn main() -> anchorfill::Result<()> {
    run().map(|_| ())
}
