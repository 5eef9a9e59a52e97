//! Three-stage decomposition of the sampling distance at one sample size.
//!
//! The squared distance between an empirical measure and the model is
//! bounded by three stages: truncate the sample to a ball of radius
//! R = 2(c·log n)^{1/2}, smooth the truncated empirical measure by the
//! time-t transition, and transport the smoothed measure to the model.
//! This module measures all three terms per smoothing time and reports
//! them against their analytic prices: the tail second moment for
//! truncation and 4Nt for smoothing.
//!
//! All stages share one base sample and per-point derived streams across
//! the whole t-grid (common random numbers), so the trade-off curve in t
//! is smooth and the scan is bitwise reproducible.

use serde::{Deserialize, Serialize};

use laguerre_core::sampling::seeds;
use laguerre_core::{sample_mu_alpha, SampleSet};
use proof_pipeline::{
    mu_ball_mass, smoothing_coupling_cost, tail_second_moment, truncate_samples,
    truncation_cost_mc, SmoothedEmpirical, TruncationConfig,
};
use transport::w2_exact_1d_model;

use crate::error::{Error, Result};
use crate::experiment::{ExperimentConfig, QUANTILE_TOL};

/// Repetitions of the rare-event Monte Carlo estimate of the truncation cost.
pub const TRUNCATION_MC_REPS: usize = 400;
/// Draws from the smoothed measure per base sample point when estimating the
/// smoothed-to-model distance.
pub const SMOOTHED_DRAW_FACTOR: usize = 16;

/// The three measured terms at one smoothing time, with their prices.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermEstimates {
    /// Smoothing time.
    pub t: f64,
    /// Monte Carlo mean of the truncation transport cost (t-independent).
    pub term1_mean: f64,
    pub term1_stderr: f64,
    /// Monte Carlo mean of the diagonal smoothing coupling cost.
    pub term2_mean: f64,
    pub term2_stderr: f64,
    /// Analytic price of the smoothing step: 4·N·t.
    pub term2_bound: f64,
    /// Squared distance from a large draw of the smoothed measure to the
    /// model (upward-biased by the finite draw size).
    pub term3: f64,
    /// term1 + term2 + term3.
    pub total: f64,
    /// The optimizable price combination at this t: tail bound + 4Nt + term3.
    pub bound_combo: f64,
}

/// Full scan over a grid of smoothing times.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub alpha: Vec<String>,
    pub n: usize,
    pub truncation_c: f64,
    /// Ball radius R = 2(c·log n)^{1/2}.
    pub radius: f64,
    /// Model mass of the ball.
    pub ball_mass: f64,
    /// Analytic tail price of the truncation step.
    pub tail_bound: f64,
    pub master_seed: u64,
    pub rows: Vec<TermEstimates>,
    /// t minimizing the measured total.
    pub best_total_t: f64,
    /// t minimizing the price combination.
    pub best_combo_t: f64,
    /// Whether the measured total attains its minimum strictly inside the
    /// scanned grid.
    pub interior_minimum: bool,
}

/// Default smoothing-time grid: log-spaced from 1e-5 to 1.
///
/// The measured total turns upward once the 4Nt smoothing price outweighs
/// the shrinking smoothed-to-model term, which happens near t ≈ 1/n; the
/// grid reaches well below that for every n in desk range, so the minimum
/// is visible in the interior of the scan.
pub fn default_t_grid() -> Vec<f64> {
    (0..16)
        .map(|k| 10f64.powf(-5.0 + 5.0 * k as f64 / 15.0))
        .collect()
}

/// Everything t-independent, computed once per scan.
struct ScanContext {
    cfg_trunc: TruncationConfig,
    truncated: SampleSet,
    term1: (f64, f64),
    radius: f64,
    ball_mass: f64,
    tail_bound: f64,
}

fn scan_context(cfg: &ExperimentConfig, n: usize) -> Result<ScanContext> {
    let params = cfg.alpha.params();
    if params.dim() != 1 {
        return Err(Error::Config(format!(
            "decomposition requires one dimension (exact distances); got {}",
            params.dim()
        )));
    }
    if n < 3 {
        return Err(Error::SmallCount(n));
    }
    let cfg_trunc = TruncationConfig::for_sample_size(cfg.truncation_c, n)?;
    let radius = cfg_trunc.radius();
    let ball_mass = mu_ball_mass(params, radius)?;
    let tail_bound = tail_second_moment(params, radius)?;
    let term1 = truncation_cost_mc(
        params,
        n,
        &cfg_trunc,
        TRUNCATION_MC_REPS,
        seeds::derive(cfg.master_seed, &[10]),
    )?;
    let base = sample_mu_alpha(params, n, seeds::derive(cfg.master_seed, &[11]))?;
    let truncated = truncate_samples(&base, params, &cfg_trunc, seeds::derive(cfg.master_seed, &[12]))?;
    Ok(ScanContext {
        cfg_trunc,
        truncated,
        term1,
        radius,
        ball_mass,
        tail_bound,
    })
}

fn terms_at(cfg: &ExperimentConfig, ctx: &ScanContext, n: usize, t: f64) -> Result<TermEstimates> {
    if !t.is_finite() || t <= 0.0 {
        return Err(Error::Config(format!("smoothing time must be positive; got {t}")));
    }
    let params = cfg.alpha.params();
    let dim = params.dim() as f64;
    let (term2_mean, term2_stderr) = smoothing_coupling_cost(
        &ctx.truncated,
        t,
        params,
        seeds::derive(cfg.master_seed, &[13]),
    )?;
    let smoothed = SmoothedEmpirical::new(ctx.truncated.clone(), t, params.clone(), &ctx.cfg_trunc)?;
    let draws = smoothed.sample_many(SMOOTHED_DRAW_FACTOR * n, seeds::derive(cfg.master_seed, &[14]))?;
    let term3 = w2_exact_1d_model(&draws, params, QUANTILE_TOL)?.squared;
    let term2_bound = 4.0 * dim * t;
    let total = ctx.term1.0 + term2_mean + term3;
    Ok(TermEstimates {
        t,
        term1_mean: ctx.term1.0,
        term1_stderr: ctx.term1.1,
        term2_mean,
        term2_stderr,
        term2_bound,
        term3,
        total,
        bound_combo: ctx.tail_bound + term2_bound + term3,
    })
}

/// The three terms and their prices at a single smoothing time.
pub fn decomposition_demo(cfg: &ExperimentConfig, n: usize, t: f64) -> Result<TermEstimates> {
    let ctx = scan_context(cfg, n)?;
    terms_at(cfg, &ctx, n, t)
}

/// Scan the three terms over a grid of smoothing times and locate the
/// minima of the measured total and of the price combination.
pub fn decomposition_scan(
    cfg: &ExperimentConfig,
    n: usize,
    t_grid: &[f64],
) -> Result<DecompositionReport> {
    if t_grid.is_empty() {
        return Err(Error::Config("t grid must be nonempty".into()));
    }
    if !t_grid.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::Config("t grid must be strictly increasing".into()));
    }
    let ctx = scan_context(cfg, n)?;
    let mut rows = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        rows.push(terms_at(cfg, &ctx, n, t)?);
    }
    let argmin = |key: fn(&TermEstimates) -> f64| {
        rows.iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| key(a).total_cmp(&key(b)))
            .map(|(i, _)| i)
            .expect("nonempty rows")
    };
    let best_total = argmin(|r| r.total);
    let best_combo = argmin(|r| r.bound_combo);
    Ok(DecompositionReport {
        alpha: cfg.alpha.text().to_vec(),
        n,
        truncation_c: cfg.truncation_c,
        radius: ctx.radius,
        ball_mass: ctx.ball_mass,
        tail_bound: ctx.tail_bound,
        master_seed: cfg.master_seed,
        rows,
        best_total_t: t_grid[best_total],
        best_combo_t: t_grid[best_combo],
        interior_minimum: best_total > 0 && best_total + 1 < t_grid.len(),
    })
}

/// CSV rendering: `# key=value` metadata lines, then one row per t.
pub fn decomposition_csv(report: &DecompositionReport) -> String {
    use std::fmt::Write as _;
    let mut out = String::new();
    let _ = writeln!(out, "# alpha={}", report.alpha.join(";"));
    let _ = writeln!(out, "# n={}", report.n);
    let _ = writeln!(out, "# truncation_C={}", report.truncation_c);
    let _ = writeln!(out, "# radius={}", report.radius);
    let _ = writeln!(out, "# ball_mass={}", report.ball_mass);
    let _ = writeln!(out, "# tail_bound={}", report.tail_bound);
    let _ = writeln!(out, "# master_seed={}", report.master_seed);
    let _ = writeln!(out, "# best_total_t={}", report.best_total_t);
    let _ = writeln!(out, "# best_combo_t={}", report.best_combo_t);
    let _ = writeln!(out, "# interior_minimum={}", report.interior_minimum);
    out.push_str(
        "t,term1_mean,term1_stderr,term2_mean,term2_stderr,term2_bound,term3,total,bound_combo\n",
    );
    for r in &report.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.t,
            r.term1_mean,
            r.term1_stderr,
            r.term2_mean,
            r.term2_stderr,
            r.term2_bound,
            r.term3,
            r.total,
            r.bound_combo
        );
    }
    out
}

/// Pretty-printed JSON of the scan, newline-terminated.
pub fn decomposition_json(report: &DecompositionReport) -> Result<String> {
    let mut text = serde_json::to_string_pretty(report)?;
    text.push('\n');
    Ok(text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alpha::ExactAlpha;
    use crate::experiment::Estimator;
    use crate::report::OutputFormat;

    fn config() -> ExperimentConfig {
        ExperimentConfig {
            alpha: ExactAlpha::parse_list("0").unwrap(),
            n_grid: vec![64],
            reps: 1,
            estimator: Estimator::Quantile1d,
            ref_factor: 16,
            master_seed: 5,
            truncation_c: 3.0,
            output_path: "unused.csv".into(),
            format: OutputFormat::Csv,
        }
    }

    #[test]
    fn default_grid_is_increasing_and_spans_the_decades() {
        let grid = default_t_grid();
        assert_eq!(grid.len(), 16);
        assert!(grid.windows(2).all(|w| w[0] < w[1]));
        assert!((grid[0] - 1e-5).abs() <= 1e-18);
        assert!((grid[15] - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn single_time_demo_reports_consistent_terms() {
        let cfg = config();
        let row = decomposition_demo(&cfg, 64, 0.05).unwrap();
        assert!(row.term1_mean >= 0.0);
        assert!(row.term2_mean > 0.0);
        assert!((row.term2_bound - 0.2).abs() <= 1e-15);
        assert!(row.term3 > 0.0);
        let sum = row.term1_mean + row.term2_mean + row.term3;
        assert!((row.total - sum).abs() <= 1e-15);
        // The smoothing coupling must respect its analytic price.
        assert!(row.term2_mean <= row.term2_bound + 3.0 * row.term2_stderr);
    }

    #[test]
    fn scan_is_deterministic_and_locates_a_minimum() {
        let cfg = config();
        let grid = [0.01, 0.1, 1.0];
        let a = decomposition_scan(&cfg, 64, &grid).unwrap();
        let b = decomposition_scan(&cfg, 64, &grid).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.rows.len(), 3);
        assert!(grid.contains(&a.best_total_t));
        // Rising smoothing price forces the total up by t = 1.
        assert!(a.rows[2].total > a.rows[0].total);
    }

    #[test]
    fn broken_grids_and_dimensions_are_refused() {
        let cfg = config();
        assert!(decomposition_scan(&cfg, 64, &[]).is_err());
        assert!(decomposition_scan(&cfg, 64, &[0.1, 0.1]).is_err());
        assert!(decomposition_demo(&cfg, 64, 0.0).is_err());
        assert!(decomposition_demo(&cfg, 2, 0.1).is_err());
        let mut nd = config();
        nd.alpha = ExactAlpha::parse_list("0,0").unwrap();
        nd.estimator = Estimator::ProxyNd;
        assert!(decomposition_demo(&nd, 64, 0.1).is_err());
    }
}
