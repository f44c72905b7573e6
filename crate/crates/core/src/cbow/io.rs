//! Model file layout (little-endian):
//!
//! ```text
//! magic         8 bytes  "AFCBOW\0\0"
//! version       u32      1
//! V             u32      vocabulary size
//! D             u32      embedding width
//! window        u32
//! epochs        u32
//! negatives     u32
//! learning_rate f64
//! min_lr_ratio  f64
//! seed          u64
//! subsample     f64      0.0 when disabled
//! min_count     u64
//! V x { word: u32 length + UTF-8 bytes, count: u64 }
//! input         V*D f64, row-major
//! output        V*D f64, row-major
//! ```

use std::fs::File;
use std::io::{BufReader, Read, Write};
use std::path::Path;

use super::{CbowHyperparams, EmbeddingModel, Vocab};
use crate::error::{Error, Result};
use crate::index::ByteReader;

pub const MODEL_MAGIC: &[u8; 8] = b"AFCBOW\0\0";
pub const MODEL_VERSION: u32 = 1;

fn u32_of(v: usize, what: &str) -> Result<u32> {
    u32::try_from(v).map_err(|_| Error::Model(format!("{what} exceeds u32")))
}

pub fn write_model<W: Write>(model: &EmbeddingModel, mut out: W) -> Result<()> {
    let h = &model.hyper;
    out.write_all(MODEL_MAGIC)?;
    out.write_all(&MODEL_VERSION.to_le_bytes())?;
    out.write_all(&u32_of(model.vocab.len(), "vocabulary size")?.to_le_bytes())?;
    for v in [h.dims, h.window, h.epochs, h.negatives] {
        out.write_all(&u32_of(v, "hyperparameter")?.to_le_bytes())?;
    }
    out.write_all(&h.learning_rate.to_le_bytes())?;
    out.write_all(&h.min_lr_ratio.to_le_bytes())?;
    out.write_all(&h.seed.to_le_bytes())?;
    out.write_all(&h.subsample.unwrap_or(0.0).to_le_bytes())?;
    out.write_all(&model.vocab.min_count().to_le_bytes())?;
    for (w, c) in model.vocab.words().iter().zip(model.vocab.counts()) {
        out.write_all(&u32_of(w.len(), "word length")?.to_le_bytes())?;
        out.write_all(w.as_bytes())?;
        out.write_all(&c.to_le_bytes())?;
    }
    for v in model.input_matrix().iter().chain(model.output_matrix()) {
        out.write_all(&v.to_le_bytes())?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_model<R: Read>(mut input: R) -> Result<EmbeddingModel> {
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes)?;
    let mut r = ByteReader::new(&bytes, "model file");
    if r.take(8).ok() != Some(MODEL_MAGIC.as_slice()) {
        return Err(Error::BadMagic { expected: "model" });
    }
    let version = r.u32()?;
    if version != MODEL_VERSION {
        return Err(Error::Version {
            what: "model file",
            found: version,
            expected: MODEL_VERSION,
        });
    }
    let v = r.u32()? as usize;
    let dims = r.u32()? as usize;
    let window = r.u32()? as usize;
    let epochs = r.u32()? as usize;
    let negatives = r.u32()? as usize;
    let learning_rate = r.f64()?;
    let min_lr_ratio = r.f64()?;
    let seed = r.u64()?;
    let subsample = r.f64()?;
    let min_count = r.u64()?;
    let hyper = CbowHyperparams {
        dims,
        window,
        epochs,
        learning_rate,
        min_lr_ratio,
        negatives,
        seed,
        subsample: (subsample != 0.0).then_some(subsample),
    };
    hyper.validate()?;

    // Bound allocations by what the file can actually hold.
    let cells = v
        .checked_mul(dims)
        .filter(|&c| c.saturating_mul(16) <= bytes.len())
        .ok_or_else(|| r.corrupt("matrix shape larger than file"))?;
    let mut words = Vec::with_capacity(v.min(bytes.len()));
    let mut counts = Vec::with_capacity(v.min(bytes.len()));
    for _ in 0..v {
        words.push(r.string()?);
        counts.push(r.u64()?);
    }
    let vocab = Vocab::from_parts(words, counts, min_count)?;
    let input = (0..cells).map(|_| r.f64()).collect::<Result<Vec<_>>>()?;
    let output = (0..cells).map(|_| r.f64()).collect::<Result<Vec<_>>>()?;
    if !r.is_done() {
        return Err(r.corrupt("trailing bytes"));
    }
    EmbeddingModel::from_parts(vocab, hyper, input, output)
}

pub fn save_model(model: &EmbeddingModel, path: impl AsRef<Path>) -> Result<()> {
    crate::fsutil::write_atomic(path.as_ref(), |w| write_model(model, w))
}

pub fn load_model(path: impl AsRef<Path>) -> Result<EmbeddingModel> {
    read_model(BufReader::new(File::open(path)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cbow::{build_vocab, train_cbow};

    fn model() -> EmbeddingModel {
        let c = vec![vec!["a", "b", "c", "a"], vec!["c", "b", "a"]];
        let vocab = build_vocab(&c, 1).unwrap();
        train_cbow(
            &c,
            vocab,
            CbowHyperparams {
                dims: 4,
                epochs: 2,
                subsample: Some(1e-3),
                ..Default::default()
            },
        )
        .unwrap()
    }

    #[test]
    fn round_trip() {
        let m = model();
        let mut buf = Vec::new();
        write_model(&m, &mut buf).unwrap();
        assert_eq!(read_model(buf.as_slice()).unwrap(), m);
    }

    #[test]
    fn truncated_file() {
        let mut buf = Vec::new();
        write_model(&model(), &mut buf).unwrap();
        for cut in [0, 7, 20, 60, buf.len() - 3] {
            assert!(read_model(&buf[..cut]).is_err(), "cut at {cut}");
        }
    }

    #[test]
    fn corrupted_magic() {
        let mut buf = Vec::new();
        write_model(&model(), &mut buf).unwrap();
        buf[1] = b'?';
        let err = read_model(buf.as_slice()).unwrap_err();
        assert_eq!(err.to_string(), "not a model file");
    }

    #[test]
    fn wrong_version() {
        let mut buf = Vec::new();
        write_model(&model(), &mut buf).unwrap();
        buf[8..12].copy_from_slice(&2u32.to_le_bytes());
        assert!(matches!(read_model(buf.as_slice()), Err(Error::Version { .. })));
    }

    #[test]
    fn shape_mismatch() {
        let mut buf = Vec::new();
        write_model(&model(), &mut buf).unwrap();
        // Claim one more dimension than stored.
        let d = u32::from_le_bytes(buf[16..20].try_into().unwrap());
        buf[16..20].copy_from_slice(&(d + 1).to_le_bytes());
        assert!(read_model(buf.as_slice()).is_err());
    }
}
