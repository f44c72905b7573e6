// Trains CBOW embeddings on a tiny synthetic language in which the middle
// word of each clause is fixed by its two neighbours, then asks the model
// to fill held-out gaps.
//
//     cargo run --example train_cbow

use anchorfill::cbow::{build_vocab, predict_center, train_cbow_with_report, CbowHyperparams};
use anchorfill::corpus::SplitRng;

/// `(sentences, gaps)` where every gap is `(left, right, expected center)`.
pub fn synthetic_grammar(pairs_per_side: usize, n: usize, seed: u64) -> (Vec<Vec<String>>, Vec<(String, String, String)>) {
    let mut rng = SplitRng::new(seed);
    let mut sentences = Vec::with_capacity(n);
    let mut gaps = Vec::with_capacity(n);
    let p = pairs_per_side as u64;
    for _ in 0..n {
        let (i, j) = (rng.below(p), rng.below(p));
        let noise_a = format!("n{}", rng.below(8));
        let noise_b = format!("n{}", rng.below(8));
        let (x, y, z) = (format!("x{i}"), format!("y{i}_{j}"), format!("z{j}"));
        gaps.push((x.clone(), z.clone(), y.clone()));
        sentences.push(vec![noise_a, x, y, z, noise_b]);
    }
    (sentences, gaps)
}

pub fn run() -> anchorfill::Result<(f64, Vec<f64>)> {
    let (train, _) = synthetic_grammar(4, 2000, 7);
    let (_, held_out) = synthetic_grammar(4, 500, 8);
    let vocab = build_vocab(&train, 1)?;
    let hyper = CbowHyperparams {
        dims: 32,
        window: 1,
        epochs: 10,
        learning_rate: 0.05,
        negatives: 5,
        seed: 42,
        ..Default::default()
    };
    let (model, report) = train_cbow_with_report(&train, vocab, hyper)?;
    for (e, loss) in report.epoch_losses.iter().enumerate() {
        println!("epoch {:2}  loss {loss:.4}", e + 1);
    }
    let hits = held_out
        .iter()
        .filter(|(l, r, y)| predict_center(&model, l, r, 1).first().map(|(w, _)| w) == Some(y))
        .count();
    let accuracy = hits as f64 / held_out.len() as f64;
    println!("held-out top-1 accuracy {:.1}% ({hits}/{})", 100.0 * accuracy, held_out.len());
    let (l, r, y) = &held_out[0];
    println!("{l} ___ {r}: {:?} (expected {y})", predict_center(&model, l, r, 3));
    Ok((accuracy, report.epoch_losses))
}

#[allow(dead_code)]
fn main() -> anchorfill::Result<()> {
    run().map(|_| ())
}
