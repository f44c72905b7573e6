//! Hole datasets, predictor scoring and per-band reports.

mod dataset;
mod metrics;
mod report;

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use dataset::{
    build_hole_dataset, build_hole_dataset_with, DatasetOptions, HoleDataset, Provenance, DATASET_FORMAT,
    DATASET_VERSION,
};
pub use metrics::{char_match, score_hole};
pub use report::{parse_plot_data, render_report, ReportFormat};

use crate::alignment::FuzzyBand;
use crate::error::{Error, Result};
use crate::predictors::{HoleQuery, PredictionCandidate, Predictor};

pub const RAW_FORMAT: &str = "anchorfill-predictions";

/// One scored hole.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawRecord {
    /// Position of the hole in its dataset.
    pub id: u64,
    pub query_ref: u32,
    pub band: FuzzyBand,
    pub reference: String,
    pub candidates: Vec<PredictionCandidate>,
    pub correct: bool,
    pub char_match: f64,
    #[serde(default)]
    pub flagged_multi_token: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct BandStats {
    pub n_holes: usize,
    pub n_correct: usize,
    pub accuracy: f64,
    pub mean_char_match: f64,
    /// Holes the predictor answered with no candidate.
    pub n_empty: usize,
    pub n_flagged: usize,
    /// Holes whose prediction failed; they count as wrong.
    pub n_errors: usize,
}

impl BandStats {
    fn from_records<'a>(records: impl Iterator<Item = &'a RawRecord>) -> Self {
        let mut s = BandStats::default();
        let mut cm = 0.0;
        for r in records {
            s.n_holes += 1;
            s.n_correct += r.correct as usize;
            cm += r.char_match;
            if r.error.is_some() {
                s.n_errors += 1;
            } else if r.candidates.is_empty() {
                s.n_empty += 1;
            }
            s.n_flagged += r.flagged_multi_token as usize;
        }
        if s.n_holes > 0 {
            s.accuracy = s.n_correct as f64 / s.n_holes as f64;
            s.mean_char_match = cm / s.n_holes as f64;
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub predictor: String,
    pub k: usize,
    pub bands: BTreeMap<FuzzyBand, BandStats>,
    pub overall: BandStats,
}

impl EvalReport {
    pub fn band(&self, band: FuzzyBand) -> BandStats {
        self.bands.get(&band).copied().unwrap_or_default()
    }
}

/// Aggregates scored holes into per-band and overall statistics. Every band
/// is present, empty ones with zero counts.
pub fn report_from_records(predictor: &str, k: usize, records: &[RawRecord]) -> EvalReport {
    let bands = FuzzyBand::ALL
        .iter()
        .map(|&b| (b, BandStats::from_records(records.iter().filter(|r| r.band == b))))
        .collect();
    EvalReport {
        predictor: predictor.to_string(),
        k,
        bands,
        overall: BandStats::from_records(records.iter()),
    }
}

/// Asks `predictor` for every hole and scores the top candidate against the
/// reference. With `jobs > 1` the dataset is cut into that many chunks that
/// run concurrently.
pub fn evaluate(
    dataset: &HoleDataset,
    predictor: &dyn Predictor,
    k: usize,
    jobs: usize,
) -> Result<(EvalReport, Vec<RawRecord>)> {
    if k == 0 {
        return Err(Error::Config("k must be at least 1".into()));
    }
    let queries: Vec<HoleQuery> = dataset
        .holes
        .iter()
        .enumerate()
        .map(|(i, h)| HoleQuery::from_hole(i as u64, h))
        .collect();
    let answers = if jobs > 1 && queries.len() > 1 {
        let size = queries.len().div_ceil(jobs);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
        pool.install(|| {
            queries
                .par_chunks(size)
                .map(|c| predictor.predict_batch(c, k))
                .collect::<Vec<_>>()
        })
        .into_iter()
        .flatten()
        .collect()
    } else {
        predictor.predict_batch(&queries, k)
    };
    if answers.len() != queries.len() {
        return Err(Error::Predictor(format!(
            "{} answered {} of {} queries",
            predictor.name(),
            answers.len(),
            queries.len()
        )));
    }
    let records: Vec<RawRecord> = dataset
        .holes
        .iter()
        .zip(answers)
        .enumerate()
        .map(|(i, (hole, answer))| {
            let mut rec = RawRecord {
                id: i as u64,
                query_ref: hole.query_ref,
                band: hole.band,
                reference: hole.reference.surface.clone(),
                candidates: Vec::new(),
                correct: false,
                char_match: 0.0,
                flagged_multi_token: false,
                error: None,
            };
            match answer {
                Ok(mut p) => {
                    p.candidates.truncate(k);
                    let (ok, cm) = score_hole(&p.candidates, &hole.reference);
                    rec.correct = ok;
                    rec.char_match = cm;
                    rec.flagged_multi_token = p.flagged_multi_token;
                    rec.candidates = p.candidates;
                }
                Err(e) => {
                    log::warn!("hole {i}: {e}");
                    rec.error = Some(e.to_string());
                }
            }
            rec
        })
        .collect();
    Ok((report_from_records(predictor.name(), k, &records), records))
}

/// Raw per-hole output of one evaluation run.
#[derive(Debug, Clone, PartialEq)]
pub struct RawDump {
    pub predictor: String,
    pub k: usize,
    pub provenance: Provenance,
    pub records: Vec<RawRecord>,
}

impl RawDump {
    pub fn write<W: Write>(&self, mut out: W) -> Result<()> {
        let header = serde_json::json!({
            "format": RAW_FORMAT,
            "version": DATASET_VERSION,
            "predictor": self.predictor,
            "k": self.k,
            "provenance": self.provenance,
        });
        serde_json::to_writer(&mut out, &header)?;
        out.write_all(b"\n")?;
        for r in &self.records {
            serde_json::to_writer(&mut out, r)?;
            out.write_all(b"\n")?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn read<R: BufRead>(input: R) -> Result<Self> {
        let mut lines = input.lines().enumerate();
        let (provenance, header) = dataset::read_header(&mut lines, RAW_FORMAT)?;
        let predictor = header
            .get("predictor")
            .and_then(|v| v.as_str())
            .ok_or(Error::Dataset {
                line: 1,
                message: "header has no predictor".into(),
            })?
            .to_string();
        let k = header.get("k").and_then(|v| v.as_u64()).unwrap_or(1) as usize;
        let mut records = Vec::new();
        for (i, line) in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            records.push(serde_json::from_str(&line).map_err(|e| Error::Dataset {
                line: i + 1,
                message: e.to_string(),
            })?);
        }
        Ok(RawDump {
            predictor,
            k,
            provenance,
            records,
        })
    }

    pub fn report(&self) -> EvalReport {
        report_from_records(&self.predictor, self.k, &self.records)
    }
}
