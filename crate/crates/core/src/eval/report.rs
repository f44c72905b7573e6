use std::fmt::Write as _;
use std::str::FromStr;

use super::{BandStats, EvalReport};
use crate::alignment::FuzzyBand;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Markdown,
    PlotData,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "markdown" | "md" => Ok(ReportFormat::Markdown),
            "plot-data" | "plot" => Ok(ReportFormat::PlotData),
            other => Err(Error::Config(format!("unknown report format {other:?}"))),
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn nonempty_bands(r: &EvalReport) -> impl Iterator<Item = (FuzzyBand, BandStats)> + '_ {
    FuzzyBand::ALL
        .into_iter()
        .map(|b| (b, r.band(b)))
        .filter(|(_, s)| s.n_holes > 0)
}

/// Renders one or more reports. CSV and plot data list only bands that hold
/// at least one hole; the markdown table always has all four band columns.
pub fn render_report(reports: &[EvalReport], format: ReportFormat) -> String {
    let mut out = String::new();
    match format {
        ReportFormat::Csv => {
            out.push_str("predictor,band,n,accuracy,mean_char_match,empty,flagged\n");
            for r in reports {
                for (b, s) in nonempty_bands(r) {
                    let _ = writeln!(
                        out,
                        "{},{},{},{},{},{},{}",
                        csv_field(&r.predictor),
                        b.label(),
                        s.n_holes,
                        s.accuracy,
                        s.mean_char_match,
                        s.n_empty,
                        s.n_flagged
                    );
                }
            }
        }
        ReportFormat::Markdown => {
            out.push_str("| predictor |");
            for b in FuzzyBand::ALL {
                let _ = write!(out, " {} |", b.label());
            }
            out.push_str("\n|---|");
            out.push_str(&"---:|".repeat(FuzzyBand::ALL.len()));
            out.push('\n');
            for r in reports {
                let _ = write!(out, "| {} |", r.predictor.replace('|', "\\|"));
                for b in FuzzyBand::ALL {
                    let s = r.band(b);
                    if s.n_holes == 0 {
                        out.push_str(" - |");
                    } else {
                        let _ = write!(out, " {:.1}% (n={}) |", 100.0 * s.accuracy, s.n_holes);
                    }
                }
                out.push('\n');
            }
        }
        ReportFormat::PlotData => {
            for r in reports {
                let _ = writeln!(out, "# predictor={}", r.predictor);
                out.push_str("band,mean_char_match\n");
                for (b, s) in nonempty_bands(r) {
                    let _ = writeln!(out, "{},{}", b.label(), s.mean_char_match);
                }
            }
        }
    }
    out
}

/// Reads plot data back into `(predictor, [(band, mean_char_match)])`.
pub fn parse_plot_data(text: &str) -> Result<Vec<(String, Vec<(FuzzyBand, f64)>)>> {
    let mut series: Vec<(String, Vec<(FuzzyBand, f64)>)> = Vec::new();
    let bad = |line: usize, message: String| Error::Dataset { line, message };
    for (i, line) in text.lines().enumerate() {
        let line = line.trim_end();
        if line.is_empty() || line == "band,mean_char_match" {
            continue;
        }
        if let Some(name) = line.strip_prefix("# predictor=") {
            series.push((name.to_string(), Vec::new()));
            continue;
        }
        let (band, value) = line
            .split_once(',')
            .ok_or_else(|| bad(i + 1, format!("expected band,value: {line:?}")))?;
        let band = FuzzyBand::from_label(band).ok_or_else(|| bad(i + 1, format!("unknown band {band:?}")))?;
        let value: f64 = value.parse().map_err(|e| bad(i + 1, format!("{e}")))?;
        series
            .last_mut()
            .ok_or_else(|| bad(i + 1, "data before any predictor line".into()))?
            .1
            .push((band, value));
    }
    Ok(series)
}
