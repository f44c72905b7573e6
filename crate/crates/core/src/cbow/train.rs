use rand::{Rng, SeedableRng};
use rand_pcg::Pcg64Mcg;

use super::{cbow_step, CbowHyperparams, EmbeddingModel, Vocab};
use crate::alignment::Folded;
use crate::error::{Error, Result};

/// Mean per-example loss of each completed epoch.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrainReport {
    pub epoch_losses: Vec<f64>,
    pub examples_per_epoch: usize,
}

/// Draws ids proportionally to `count^0.75`.
struct NegativeTable {
    cumulative: Vec<f64>,
}

impl NegativeTable {
    fn new(vocab: &Vocab) -> Self {
        let mut acc = 0.0;
        let cumulative = vocab
            .counts()
            .iter()
            .map(|&c| {
                acc += (c as f64).powf(0.75);
                acc
            })
            .collect();
        NegativeTable { cumulative }
    }

    fn draw(&self, rng: &mut Pcg64Mcg) -> u32 {
        let total = *self.cumulative.last().unwrap();
        let u = rng.gen::<f64>() * total;
        let i = self.cumulative.partition_point(|&c| c <= u);
        i.min(self.cumulative.len() - 1) as u32
    }
}

pub fn train_cbow<S, T>(corpus: &[S], vocab: Vocab, hyper: CbowHyperparams) -> Result<EmbeddingModel>
where
    S: AsRef<[T]>,
    T: Folded,
{
    train_cbow_with_report(corpus, vocab, hyper).map(|(m, _)| m)
}

/// Single-threaded, deterministic for a fixed seed.
///
/// Out-of-vocabulary tokens are dropped before windowing. Each position
/// uses up to `window` neighbours on each side. Negatives are drawn from
/// the unigram distribution raised to 3/4, redrawing the center id. The
/// learning rate decays linearly over all epochs down to
/// `learning_rate * min_lr_ratio`.
pub fn train_cbow_with_report<S, T>(
    corpus: &[S],
    vocab: Vocab,
    hyper: CbowHyperparams,
) -> Result<(EmbeddingModel, TrainReport)>
where
    S: AsRef<[T]>,
    T: Folded,
{
    let mut model = EmbeddingModel::init(vocab, hyper)?;
    let hyper = model.hyper.clone();
    let sentences: Vec<Vec<u32>> = corpus
        .iter()
        .map(|s| s.as_ref().iter().filter_map(|t| model.vocab.id(t.folded())).collect())
        .collect();
    let examples_per_epoch: usize = sentences.iter().filter(|s| s.len() >= 2).map(Vec::len).sum();
    if examples_per_epoch == 0 {
        return Err(Error::Model(
            "corpus has no in-vocabulary position with context".into(),
        ));
    }

    let mut report = TrainReport {
        epoch_losses: Vec::with_capacity(hyper.epochs),
        examples_per_epoch,
    };
    let table = NegativeTable::new(&model.vocab);
    // Separate stream from initialization.
    let mut rng = Pcg64Mcg::seed_from_u64(hyper.seed.wrapping_add(0x5eed));
    let total = (examples_per_epoch * hyper.epochs) as f64;
    let floor = hyper.learning_rate * hyper.min_lr_ratio;
    let total_words: u64 = model.vocab.counts().iter().sum();
    let can_sample_negatives = model.vocab.len() > 1;

    let mut processed = 0usize;
    let mut negatives = Vec::with_capacity(hyper.negatives);
    let mut context = Vec::with_capacity(2 * hyper.window);
    for _ in 0..hyper.epochs {
        let mut loss_sum = 0.0;
        let mut n_examples = 0usize;
        for sentence in &sentences {
            let kept: Vec<u32> = match hyper.subsample {
                None => sentence.clone(),
                Some(t) => sentence
                    .iter()
                    .copied()
                    .filter(|&id| {
                        let f = model.vocab.count(id) as f64 / total_words as f64;
                        let keep = ((f / t).sqrt() + 1.0) * t / f;
                        keep >= 1.0 || rng.gen::<f64>() < keep
                    })
                    .collect(),
            };
            for pos in 0..kept.len() {
                let lo = pos.saturating_sub(hyper.window);
                let hi = (pos + hyper.window + 1).min(kept.len());
                context.clear();
                context.extend((lo..hi).filter(|&j| j != pos).map(|j| kept[j]));
                if context.is_empty() {
                    continue;
                }
                let center = kept[pos];
                negatives.clear();
                if can_sample_negatives {
                    while negatives.len() < hyper.negatives {
                        let n = table.draw(&mut rng);
                        if n != center {
                            negatives.push(n);
                        }
                    }
                }
                let progress = processed as f64 / total;
                let lr = (hyper.learning_rate * (1.0 - progress)).max(floor);
                loss_sum += cbow_step(&mut model, &context, center, &negatives, lr)?;
                n_examples += 1;
                processed += 1;
            }
        }
        report
            .epoch_losses
            .push(if n_examples > 0 { loss_sum / n_examples as f64 } else { 0.0 });
    }
    Ok((model, report))
}
