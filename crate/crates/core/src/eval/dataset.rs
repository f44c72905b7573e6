use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use log::warn;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::alignment::{extract_anchored_holes, AnchoredHole};
use crate::corpus::TranslationMemory;
use crate::error::{Error, Result};
use crate::index::{LookupOptions, TmIndex};

pub const DATASET_FORMAT: &str = "anchorfill-holes";
pub const DATASET_VERSION: u32 = 1;

/// Where a dataset came from. Serialized as the first line of a dataset
/// file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    /// Fingerprint of the memory the queries came from.
    pub queries: String,
    /// Fingerprint of the memory that was searched.
    pub memory: String,
    /// Fingerprint of the index over `memory` (side and configuration).
    pub index: String,
    /// Effective configuration that produced the file.
    #[serde(default)]
    pub config: BTreeMap<String, serde_json::Value>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HoleDataset {
    pub holes: Vec<AnchoredHole>,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DatasetOptions {
    pub min_fms: f64,
    /// Worker threads for the lookups; 1 runs inline.
    pub jobs: usize,
}

impl Default for DatasetOptions {
    fn default() -> Self {
        DatasetOptions {
            min_fms: 60.0,
            jobs: 1,
        }
    }
}

pub(crate) fn index_fingerprint(index: &TmIndex) -> String {
    let mut h = Sha256::new();
    h.update(index.memory_fingerprint());
    h.update([index.side().as_byte(), index.config().ngram]);
    h.update(index.config().length_slack.to_le_bytes());
    hex::encode(&h.finalize()[..16])
}

/// Holes for every query segment of `test` against its best non-exact
/// fuzzy match in `tm`.
pub fn build_hole_dataset(
    test: &TranslationMemory,
    index: &TmIndex,
    tm: &TranslationMemory,
    min_fms: f64,
) -> Result<HoleDataset> {
    build_hole_dataset_with(
        test,
        index,
        tm,
        &DatasetOptions {
            min_fms,
            ..Default::default()
        },
    )
}

pub fn build_hole_dataset_with(
    test: &TranslationMemory,
    index: &TmIndex,
    tm: &TranslationMemory,
    opts: &DatasetOptions,
) -> Result<HoleDataset> {
    index.check_memory(tm)?;
    let side = index.side();
    let lookup = LookupOptions {
        min_fms: opts.min_fms,
        k: 1,
        exclude_exact: true,
    };
    let holes_for = |unit: &crate::corpus::TranslationUnit| -> Vec<AnchoredHole> {
        let query = unit.side(side);
        match index.lookup(tm, query, &lookup).first() {
            Some(m) => extract_anchored_holes(unit.id, query, m, tm, side),
            None => Vec::new(),
        }
    };
    let per_unit: Vec<Vec<AnchoredHole>> = if opts.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.jobs)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
        pool.install(|| test.units().par_iter().map(holes_for).collect())
    } else {
        test.units().iter().map(holes_for).collect()
    };
    let holes: Vec<AnchoredHole> = per_unit.into_iter().flatten().collect();
    if holes.is_empty() {
        warn!("no anchored holes found in {} query segments", test.len());
    }
    let mut config = BTreeMap::new();
    config.insert("min_fms".into(), serde_json::json!(opts.min_fms));
    config.insert("side".into(), serde_json::json!(side.to_string()));
    config.insert("ngram".into(), serde_json::json!(index.config().ngram));
    Ok(HoleDataset {
        holes,
        provenance: Provenance {
            queries: test.fingerprint(),
            memory: tm.fingerprint(),
            index: index_fingerprint(index),
            config,
        },
    })
}

#[derive(Serialize, Deserialize)]
struct Header<'a> {
    format: std::borrow::Cow<'a, str>,
    version: u32,
    provenance: std::borrow::Cow<'a, Provenance>,
}

impl HoleDataset {
    /// SHA-256 prefix over the serialized holes.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        for hole in &self.holes {
            h.update(serde_json::to_vec(hole).expect("hole serializes"));
            h.update(b"\n");
        }
        hex::encode(&h.finalize()[..16])
    }

    pub fn write<W: Write>(&self, mut out: W) -> Result<()> {
        let header = Header {
            format: DATASET_FORMAT.into(),
            version: DATASET_VERSION,
            provenance: std::borrow::Cow::Borrowed(&self.provenance),
        };
        serde_json::to_writer(&mut out, &header)?;
        out.write_all(b"\n")?;
        for hole in &self.holes {
            serde_json::to_writer(&mut out, hole)?;
            out.write_all(b"\n")?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn read<R: BufRead>(input: R) -> Result<Self> {
        let mut lines = input.lines().enumerate();
        let provenance = read_header(&mut lines, DATASET_FORMAT)?.0;
        let mut holes = Vec::new();
        for (i, line) in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let hole: AnchoredHole = serde_json::from_str(&line).map_err(|e| Error::Dataset {
                line: i + 1,
                message: e.to_string(),
            })?;
            holes.push(hole);
        }
        Ok(HoleDataset { holes, provenance })
    }
}

/// Reads and checks a `{"format", "version", "provenance", ...}` header
/// line, returning the provenance and the raw header object.
pub(crate) fn read_header<I>(lines: &mut I, format: &str) -> Result<(Provenance, serde_json::Value)>
where
    I: Iterator<Item = (usize, std::io::Result<String>)>,
{
    let (_, first) = lines.next().ok_or(Error::Dataset {
        line: 1,
        message: "missing header line".into(),
    })?;
    let header: serde_json::Value = serde_json::from_str(&first?).map_err(|e| Error::Dataset {
        line: 1,
        message: format!("bad header: {e}"),
    })?;
    if header.get("format").and_then(|v| v.as_str()) != Some(format) {
        return Err(Error::Dataset {
            line: 1,
            message: format!("not a {format} file"),
        });
    }
    let version = header.get("version").and_then(|v| v.as_u64()).unwrap_or(0) as u32;
    if version != DATASET_VERSION {
        return Err(Error::Version {
            what: "dataset",
            found: version,
            expected: DATASET_VERSION,
        });
    }
    let provenance: Provenance = serde_json::from_value(header.get("provenance").cloned().unwrap_or_default())
        .map_err(|e| Error::Dataset {
            line: 1,
            message: format!("bad provenance: {e}"),
        })?;
    if provenance.memory.is_empty() || provenance.index.is_empty() || provenance.queries.is_empty() {
        return Err(Error::Dataset {
            line: 1,
            message: "provenance fingerprints must be non-empty".into(),
        });
    }
    Ok((provenance, header))
}
