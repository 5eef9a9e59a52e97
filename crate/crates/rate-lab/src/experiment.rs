//! The rate experiment: measure the squared distance between empirical
//! measures and the model across a grid of sample sizes.
//!
//! Every repetition draws a fresh sample from its own derived seed and is
//! estimated independently, so repetitions parallelize freely; results are
//! merged in (grid index, repetition) order, making the report independent
//! of scheduling and bitwise reproducible from the master seed.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use laguerre_core::sampling::seeds;
use laguerre_core::stats::mean_stderr;
use laguerre_core::{sample_mu_alpha, ModelParams, SampleSet};
use transport::{w2_exact_1d_model, w2_model_proxy_nd, ProxySolver};

use crate::alpha::ExactAlpha;
use crate::error::{Error, Result};
use crate::rates::{classify, fit_loglog_slope, predicted_rate, Regime};
use crate::report::{ConfigEcho, OutputFormat, RateReport, RepRecord, SummaryRecord};

/// How one repetition turns a drawn sample into a squared distance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Estimator {
    /// Exact semidiscrete distance by quantile integration; one dimension only.
    #[serde(rename = "quantile-1d")]
    Quantile1d,
    /// Exact discrete distance to an independent model reference sample of
    /// `ref_factor · n` points.
    #[serde(rename = "proxy-nd")]
    ProxyNd,
    /// Entropic (debiased) estimate of the same reference-sample distance.
    #[serde(rename = "sinkhorn-proxy")]
    SinkhornProxy,
}

impl Estimator {
    pub fn label(self) -> &'static str {
        match self {
            Estimator::Quantile1d => "quantile-1d",
            Estimator::ProxyNd => "proxy-nd",
            Estimator::SinkhornProxy => "sinkhorn-proxy",
        }
    }
}

impl std::fmt::Display for Estimator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for Estimator {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quantile-1d" => Ok(Estimator::Quantile1d),
            "proxy-nd" => Ok(Estimator::ProxyNd),
            "sinkhorn-proxy" => Ok(Estimator::SinkhornProxy),
            other => Err(Error::Config(format!(
                "unknown estimator '{other}' (expected quantile-1d, proxy-nd, or sinkhorn-proxy)"
            ))),
        }
    }
}

/// Integration budget of the quantile estimator; far below the Monte Carlo
/// noise floor of any experiment in range.
pub const QUANTILE_TOL: f64 = 1e-9;
/// Temperature of the entropic proxy estimator.
pub const SINKHORN_PROXY_EPSILON: f64 = 1e-2;
/// Iteration budget of the entropic proxy estimator.
pub const SINKHORN_PROXY_MAX_ITER: u64 = 20_000;

/// Everything a rate experiment needs; validated before running.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub alpha: ExactAlpha,
    /// Strictly increasing sample sizes, each at least 3.
    pub n_grid: Vec<usize>,
    /// Repetitions per sample size (at least 1).
    pub reps: usize,
    pub estimator: Estimator,
    /// Reference sample multiplier of the proxy estimators (at least 4).
    pub ref_factor: usize,
    /// Root of every derived random stream.
    pub master_seed: u64,
    /// Radius constant for decomposition runs: R = 2(c · log n)^{1/2}.
    pub truncation_c: f64,
    pub output_path: String,
    pub format: OutputFormat,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_grid.is_empty() {
            return Err(Error::Config("n_grid must be nonempty".into()));
        }
        if self.n_grid[0] < 3 {
            return Err(Error::Config(format!(
                "n_grid entries must be at least 3; got {}",
                self.n_grid[0]
            )));
        }
        if !self.n_grid.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Config(
                "n_grid must be strictly increasing".into(),
            ));
        }
        if self.reps < 1 {
            return Err(Error::Config("reps must be at least 1".into()));
        }
        if self.estimator == Estimator::Quantile1d && self.alpha.dim() != 1 {
            return Err(Error::Config(format!(
                "estimator quantile-1d requires one dimension; got {}",
                self.alpha.dim()
            )));
        }
        if self.estimator != Estimator::Quantile1d && self.ref_factor < 4 {
            return Err(Error::Config(format!(
                "ref_factor must be at least 4; got {}",
                self.ref_factor
            )));
        }
        if !self.truncation_c.is_finite() || self.truncation_c <= 0.0 {
            return Err(Error::Config(format!(
                "truncation_C must be positive; got {}",
                self.truncation_c
            )));
        }
        classify(&self.alpha)?;
        Ok(())
    }

    /// Seed of the sample stream for grid point `n_idx`, repetition `rep`.
    pub fn sample_seed(&self, n_idx: usize, rep: usize) -> u64 {
        seeds::derive(self.master_seed, &[n_idx as u64, rep as u64, 0])
    }

    /// Seed of the estimator's own randomness (reference sample draws).
    pub fn estimator_seed(&self, n_idx: usize, rep: usize) -> u64 {
        seeds::derive(self.master_seed, &[n_idx as u64, rep as u64, 1])
    }
}

/// One repetition: draw the sample and estimate the squared distance.
fn estimate_one(
    cfg: &ExperimentConfig,
    params: &ModelParams,
    samples: &SampleSet,
    estimator_seed: u64,
) -> Result<f64> {
    let result = match cfg.estimator {
        Estimator::Quantile1d => w2_exact_1d_model(samples, params, QUANTILE_TOL)?,
        Estimator::ProxyNd => w2_model_proxy_nd(
            samples,
            params,
            cfg.ref_factor,
            estimator_seed,
            ProxySolver::Exact,
        )?,
        Estimator::SinkhornProxy => w2_model_proxy_nd(
            samples,
            params,
            cfg.ref_factor,
            estimator_seed,
            ProxySolver::Sinkhorn {
                epsilon: SINKHORN_PROXY_EPSILON,
                max_iter: SINKHORN_PROXY_MAX_ITER,
            },
        )?,
    };
    Ok(result.squared)
}

/// Run the full grid and assemble the report.
///
/// Solver failures are recorded as empty repetitions and excluded from the
/// aggregates with a count; sampling failures cannot occur for a validated
/// configuration.
pub fn run_rate_experiment(cfg: &ExperimentConfig) -> Result<RateReport> {
    cfg.validate()?;
    let params = cfg.alpha.params();
    let regime = classify(&cfg.alpha)?;

    let tasks: Vec<(usize, usize)> = (0..cfg.n_grid.len())
        .flat_map(|i| (0..cfg.reps).map(move |rep| (i, rep)))
        .collect();
    // Order-preserving parallel map: the collected vector is in task order
    // regardless of how the work was scheduled.
    let outcomes: Vec<(u64, Option<f64>)> = tasks
        .par_iter()
        .map(|&(i, rep)| {
            let n = cfg.n_grid[i];
            let sample_seed = cfg.sample_seed(i, rep);
            let value = sample_mu_alpha(params, n, sample_seed)
                .map_err(Error::from)
                .and_then(|samples| {
                    estimate_one(cfg, params, &samples, cfg.estimator_seed(i, rep))
                })
                .ok();
            (sample_seed, value)
        })
        .collect();

    let records: Vec<RepRecord> = tasks
        .iter()
        .zip(&outcomes)
        .map(|(&(i, rep), &(seed, w2sq))| RepRecord {
            n: cfg.n_grid[i],
            rep,
            w2sq,
            estimator: cfg.estimator,
            seed,
        })
        .collect();
    let failures = records.iter().filter(|r| r.w2sq.is_none()).count();

    let mut summary = Vec::with_capacity(cfg.n_grid.len());
    for (i, &n) in cfg.n_grid.iter().enumerate() {
        let values: Vec<f64> = records[i * cfg.reps..(i + 1) * cfg.reps]
            .iter()
            .filter_map(|r| r.w2sq)
            .collect();
        let (mean_w2sq, stderr) = match values.len() {
            0 => (None, None),
            1 => (Some(values[0]), None),
            _ => {
                let (m, se) = mean_stderr(&values);
                (Some(m), Some(se))
            }
        };
        let (_, predicted) = predicted_rate(&cfg.alpha, n)?;
        summary.push(SummaryRecord {
            n,
            mean_w2sq,
            stderr,
            reps: values.len(),
            predicted_rate: predicted,
            regime,
        });
    }

    let fit_input: Vec<(usize, f64)> = summary
        .iter()
        .filter_map(|s| s.mean_w2sq.filter(|&m| m > 0.0).map(|m| (s.n, m)))
        .collect();
    let (fitted_slope, slope_stderr) = match fit_loglog_slope(&fit_input) {
        Ok((slope, se)) => (Some(slope), Some(se)),
        Err(_) => (None, None),
    };

    Ok(RateReport {
        config: ConfigEcho::from_config(cfg),
        records,
        summary,
        fitted_slope,
        slope_stderr,
        regime,
        failures,
    })
}
