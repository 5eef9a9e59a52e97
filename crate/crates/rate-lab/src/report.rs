//! Report types and deterministic CSV/JSON emission.
//!
//! Identical configuration must produce byte-identical files, so nothing
//! time- or machine-dependent is ever serialized; wall-clock timings go to
//! stderr at the call sites. Floats are written in Rust's shortest
//! round-trip form, which preserves full precision.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiment::{Estimator, ExperimentConfig};
use crate::rates::Regime;

/// On-disk layout of an emitted report.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OutputFormat {
    /// Two files: every repetition, then a per-n summary.
    #[serde(rename = "csv")]
    Csv,
    /// One file with config echo, records, summary, and the fit.
    #[serde(rename = "json")]
    Json,
}

impl OutputFormat {
    pub fn label(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

impl std::fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::Config(format!(
                "unknown format '{other}' (expected csv or json)"
            ))),
        }
    }
}

/// The configuration echoed into every report, in serializable form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub alpha: Vec<String>,
    pub n_grid: Vec<usize>,
    pub reps: usize,
    pub estimator: Estimator,
    pub ref_factor: usize,
    pub master_seed: u64,
    pub truncation_c: f64,
    pub output_path: String,
    pub format: OutputFormat,
}

impl ConfigEcho {
    pub fn from_config(cfg: &ExperimentConfig) -> Self {
        Self {
            alpha: cfg.alpha.text().to_vec(),
            n_grid: cfg.n_grid.clone(),
            reps: cfg.reps,
            estimator: cfg.estimator,
            ref_factor: cfg.ref_factor,
            master_seed: cfg.master_seed,
            truncation_c: cfg.truncation_c,
            output_path: cfg.output_path.clone(),
            format: cfg.format,
        }
    }
}

/// One repetition: the squared distance measured on one fresh sample.
/// `w2sq` is `None` when the solver failed for this repetition; such rows
/// keep their place in the records but are excluded from aggregation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepRecord {
    pub n: usize,
    pub rep: usize,
    pub w2sq: Option<f64>,
    pub estimator: Estimator,
    /// Seed of the sample stream that produced this repetition's draw.
    pub seed: u64,
}

/// Aggregate over the successful repetitions at one sample size.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRecord {
    pub n: usize,
    /// Mean of the successful repetitions; `None` if all failed.
    pub mean_w2sq: Option<f64>,
    /// Standard error; `None` below two successful repetitions.
    pub stderr: Option<f64>,
    /// Number of successful repetitions aggregated.
    pub reps: usize,
    /// Constant-free predicted rate value at this n.
    pub predicted_rate: f64,
    pub regime: Regime,
}

/// Complete result of a rate experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateReport {
    pub config: ConfigEcho,
    pub records: Vec<RepRecord>,
    pub summary: Vec<SummaryRecord>,
    /// OLS slope of log mean on log n; `None` when fewer than three grid
    /// points produced a positive mean.
    pub fitted_slope: Option<f64>,
    pub slope_stderr: Option<f64>,
    pub regime: Regime,
    /// Total repetitions whose solver failed (excluded from the summary).
    pub failures: usize,
}

/// Path of the per-n summary twin of a records CSV: `rate.csv` →
/// `rate_summary.csv`.
pub fn summary_path(records: &Path) -> PathBuf {
    let stem = records
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("report");
    let name = match records.extension().and_then(|e| e.to_str()) {
        Some(ext) => format!("{stem}_summary.{ext}"),
        None => format!("{stem}_summary"),
    };
    records.with_file_name(name)
}

fn opt(value: Option<f64>) -> String {
    value.map(|v| v.to_string()).unwrap_or_default()
}

/// Records CSV: header `n,rep,w2sq,estimator,seed`, one row per repetition.
pub fn records_csv(report: &RateReport) -> String {
    let mut out = String::from("n,rep,w2sq,estimator,seed\n");
    for r in &report.records {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.n,
            r.rep,
            opt(r.w2sq),
            r.estimator,
            r.seed
        );
    }
    out
}

/// Summary CSV: header `n,mean_w2sq,stderr,predicted_rate,regime`.
pub fn summary_csv(report: &RateReport) -> String {
    let mut out = String::from("n,mean_w2sq,stderr,predicted_rate,regime\n");
    for s in &report.summary {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            s.n,
            opt(s.mean_w2sq),
            opt(s.stderr),
            s.predicted_rate,
            s.regime
        );
    }
    out
}

/// Pretty-printed JSON of the full report, newline-terminated.
pub fn report_json(report: &RateReport) -> Result<String> {
    let mut text = serde_json::to_string_pretty(report)?;
    text.push('\n');
    Ok(text)
}

pub fn write_file(path: &Path, content: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(|source| Error::Io {
                path: parent.to_path_buf(),
                source,
            })?;
        }
    }
    std::fs::write(path, content).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Write the report per the configured format, overwriting existing files,
/// and return the written paths (records first).
pub fn emit_report(report: &RateReport, cfg: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    let records = PathBuf::from(&cfg.output_path);
    match cfg.format {
        OutputFormat::Csv => {
            let summary = summary_path(&records);
            write_file(&records, &records_csv(report))?;
            write_file(&summary, &summary_csv(report))?;
            Ok(vec![records, summary])
        }
        OutputFormat::Json => {
            write_file(&records, &report_json(report)?)?;
            Ok(vec![records])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_path_inserts_the_suffix_before_the_extension() {
        assert_eq!(
            summary_path(Path::new("out/rate.csv")),
            PathBuf::from("out/rate_summary.csv")
        );
        assert_eq!(
            summary_path(Path::new("plain")),
            PathBuf::from("plain_summary")
        );
    }

    #[test]
    fn missing_values_serialize_as_empty_csv_fields() {
        assert_eq!(opt(None), "");
        assert_eq!(opt(Some(0.25)), "0.25");
    }
}
