//! Continuous bag-of-words embeddings trained with negative sampling, and
//! center-word prediction from a pair of anchors.

mod io;
mod train;
mod vocab;

use rand::{Rng, SeedableRng};
use rand_pcg::Pcg64Mcg;
use serde::{Deserialize, Serialize};

pub use io::{load_model, read_model, save_model, write_model, MODEL_MAGIC, MODEL_VERSION};
pub use train::{train_cbow, train_cbow_with_report, TrainReport};
pub use vocab::{build_vocab, Vocab};

use crate::error::{Error, Result};

/// Arguments of the logistic function are clamped to this magnitude.
pub const SIGMOID_CLAMP: f64 = 30.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CbowHyperparams {
    pub dims: usize,
    /// Context radius in tokens.
    pub window: usize,
    pub epochs: usize,
    pub learning_rate: f64,
    /// The learning rate decays linearly to `learning_rate * min_lr_ratio`.
    pub min_lr_ratio: f64,
    pub negatives: usize,
    pub seed: u64,
    /// Frequent-word subsampling threshold; `None` disables subsampling.
    pub subsample: Option<f64>,
}

impl Default for CbowHyperparams {
    fn default() -> Self {
        CbowHyperparams {
            dims: 300,
            window: 2,
            epochs: 5,
            learning_rate: 0.05,
            min_lr_ratio: 1e-4,
            negatives: 5,
            seed: 42,
            subsample: None,
        }
    }
}

impl CbowHyperparams {
    /// Window used for fine-tuning passes over in-domain text.
    pub const FINE_TUNE_WINDOW: usize = 3;

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Model(m.to_string()));
        if self.dims == 0 {
            return bad("dims must be at least 1");
        }
        if self.window == 0 {
            return bad("window must be at least 1");
        }
        if self.negatives == 0 {
            return bad("negatives must be at least 1");
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return bad("learning rate must be positive");
        }
        if !(0.0..=1.0).contains(&self.min_lr_ratio) {
            return bad("min_lr_ratio must be in [0, 1]");
        }
        if let Some(t) = self.subsample {
            if !(t > 0.0 && t.is_finite()) {
                return bad("subsample threshold must be positive");
            }
        }
        Ok(())
    }
}

/// Vocabulary plus context (`input`) and center-word (`output`) matrices,
/// each `V x D`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingModel {
    pub vocab: Vocab,
    pub hyper: CbowHyperparams,
    input: Vec<f64>,
    output: Vec<f64>,
}

impl EmbeddingModel {
    /// Input rows uniform in `[-0.5/D, 0.5/D)`, output rows zero.
    pub fn init(vocab: Vocab, hyper: CbowHyperparams) -> Result<Self> {
        hyper.validate()?;
        let d = hyper.dims;
        let mut rng = Pcg64Mcg::seed_from_u64(hyper.seed);
        let input = (0..vocab.len() * d)
            .map(|_| (rng.gen::<f64>() - 0.5) / d as f64)
            .collect();
        let output = vec![0.0; vocab.len() * d];
        Ok(EmbeddingModel {
            vocab,
            hyper,
            input,
            output,
        })
    }

    pub(crate) fn from_parts(
        vocab: Vocab,
        hyper: CbowHyperparams,
        input: Vec<f64>,
        output: Vec<f64>,
    ) -> Result<Self> {
        let want = vocab.len() * hyper.dims;
        if input.len() != want || output.len() != want {
            return Err(Error::Model(format!(
                "matrix shape mismatch: expected {} x {}",
                vocab.len(),
                hyper.dims
            )));
        }
        Ok(EmbeddingModel {
            vocab,
            hyper,
            input,
            output,
        })
    }

    pub fn dims(&self) -> usize {
        self.hyper.dims
    }

    pub fn input_row(&self, id: u32) -> &[f64] {
        let d = self.dims();
        &self.input[id as usize * d..(id as usize + 1) * d]
    }

    pub fn output_row(&self, id: u32) -> &[f64] {
        let d = self.dims();
        &self.output[id as usize * d..(id as usize + 1) * d]
    }

    pub fn input_row_mut(&mut self, id: u32) -> &mut [f64] {
        let d = self.dims();
        &mut self.input[id as usize * d..(id as usize + 1) * d]
    }

    pub fn output_row_mut(&mut self, id: u32) -> &mut [f64] {
        let d = self.dims();
        &mut self.output[id as usize * d..(id as usize + 1) * d]
    }

    pub fn input_matrix(&self) -> &[f64] {
        &self.input
    }

    pub fn output_matrix(&self) -> &[f64] {
        &self.output
    }

    pub fn is_finite(&self) -> bool {
        self.input.iter().chain(&self.output).all(|v| v.is_finite())
    }

    fn context_mean(&self, context: &[u32]) -> Vec<f64> {
        let mut h = vec![0.0; self.dims()];
        for &c in context {
            for (a, b) in h.iter_mut().zip(self.input_row(c)) {
                *a += b;
            }
        }
        let n = context.len() as f64;
        h.iter_mut().for_each(|v| *v /= n);
        h
    }

    fn check_ids(&self, ids: &[u32]) -> Result<()> {
        let v = self.vocab.len() as u32;
        match ids.iter().find(|&&id| id >= v) {
            Some(id) => Err(Error::Model(format!("token id {id} out of range (V = {v})"))),
            None => Ok(()),
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn sigmoid(x: f64) -> f64 {
    let x = x.clamp(-SIGMOID_CLAMP, SIGMOID_CLAMP);
    1.0 / (1.0 + (-x).exp())
}

/// `ln(1 + e^z)` without overflow.
fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

/// Negative-sampling loss
/// `-ln σ(h·o_center) - Σ ln σ(-h·o_neg)` with `h` the mean context row.
pub fn cbow_loss(model: &EmbeddingModel, context: &[u32], center: u32, negatives: &[u32]) -> Result<f64> {
    if context.is_empty() {
        return Err(Error::Model("empty context".into()));
    }
    model.check_ids(context)?;
    model.check_ids(&[center])?;
    model.check_ids(negatives)?;
    let h = model.context_mean(context);
    let clamp = |x: f64| x.clamp(-SIGMOID_CLAMP, SIGMOID_CLAMP);
    let mut loss = softplus(-clamp(dot(&h, model.output_row(center))));
    for &n in negatives {
        loss += softplus(clamp(dot(&h, model.output_row(n))));
    }
    if !loss.is_finite() {
        return Err(Error::Model(format!("non-finite loss {loss}")));
    }
    Ok(loss)
}

/// Gradient of [`cbow_loss`] with respect to every row it touches.
/// Rows appearing more than once have their contributions summed.
#[derive(Debug, Clone, PartialEq)]
pub struct CbowGradients {
    pub loss: f64,
    pub input: Vec<(u32, Vec<f64>)>,
    pub output: Vec<(u32, Vec<f64>)>,
}

fn accumulate(rows: &mut Vec<(u32, Vec<f64>)>, id: u32, grad: impl Iterator<Item = f64>) {
    match rows.iter_mut().find(|(r, _)| *r == id) {
        Some((_, g)) => g.iter_mut().zip(grad).for_each(|(a, b)| *a += b),
        None => rows.push((id, grad.collect())),
    }
}

pub fn cbow_gradients(
    model: &EmbeddingModel,
    context: &[u32],
    center: u32,
    negatives: &[u32],
) -> Result<CbowGradients> {
    let loss = cbow_loss(model, context, center, negatives)?;
    let h = model.context_mean(context);
    let mut grad_h = vec![0.0; model.dims()];
    let mut output = Vec::with_capacity(1 + negatives.len());
    let targets = std::iter::once((center, 1.0)).chain(negatives.iter().map(|&n| (n, 0.0)));
    for (id, label) in targets {
        let o = model.output_row(id);
        // d/dx of -ln σ(x) is σ(x) - 1; of -ln σ(-x) is σ(x).
        let g = sigmoid(dot(&h, o)) - label;
        grad_h.iter_mut().zip(o).for_each(|(a, b)| *a += g * b);
        accumulate(&mut output, id, h.iter().map(|v| g * v));
    }
    let scale = 1.0 / context.len() as f64;
    let mut input = Vec::with_capacity(context.len());
    for &c in context {
        accumulate(&mut input, c, grad_h.iter().map(|v| v * scale));
    }
    Ok(CbowGradients { loss, input, output })
}

/// One SGD step on a (context, center) example. Returns the loss before
/// the update.
pub fn cbow_step(
    model: &mut EmbeddingModel,
    context: &[u32],
    center: u32,
    negatives: &[u32],
    lr: f64,
) -> Result<f64> {
    let grads = cbow_gradients(model, context, center, negatives)?;
    for (id, g) in &grads.output {
        model
            .output_row_mut(*id)
            .iter_mut()
            .zip(g)
            .for_each(|(w, g)| *w -= lr * g);
    }
    for (id, g) in &grads.input {
        model
            .input_row_mut(*id)
            .iter_mut()
            .zip(g)
            .for_each(|(w, g)| *w -= lr * g);
    }
    Ok(grads.loss)
}

/// Ranks vocabulary words as the missing center between `left` and
/// `right` (folded forms). An out-of-vocabulary anchor is ignored; if both
/// are unknown the result is empty. Ties rank by ascending id.
pub fn predict_center(model: &EmbeddingModel, left: &str, right: &str, k: usize) -> Vec<(String, f64)> {
    let context: Vec<u32> = [left, right]
        .iter()
        .filter_map(|w| model.vocab.id(w))
        .collect();
    if context.is_empty() || k == 0 {
        return Vec::new();
    }
    let h = model.context_mean(&context);
    let mut scored: Vec<(u32, f64)> = (0..model.vocab.len() as u32)
        .map(|id| (id, dot(&h, model.output_row(id))))
        .collect();
    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    scored.truncate(k);
    scored
        .into_iter()
        .map(|(id, s)| (model.vocab.word(id).to_string(), s))
        .collect()
}
