//! Numerical verification of the functional inequalities behind the
//! smoothing argument: variance drop under the semigroup, the ball-bias
//! decomposition, the gradient contraction, and the on-diagonal kernel
//! comparison. Every check is recorded as (value, bound, tolerance, pass).

use laguerre_core::kernel::{ln_kernel_closed_1d, phi_comparison, KernelEvaluator};
use laguerre_core::params::{ModelParams, Point};
use laguerre_core::policy::NumericPolicy;
use laguerre_core::quad::{integrate_mu, integrate_mu_below, GaussLegendre};
use laguerre_core::special::{gamma_p, ln_gamma};
use std::fmt;

use crate::error::{Error, Result};
use crate::truncation::TruncationConfig;

/// Which side of the bound the computed value must fall on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundKind {
    AtMost,
    AtLeast,
}

/// One verified inequality: the computed value, the bound it was checked
/// against, the additive tolerance, and the outcome.
#[derive(Clone, Debug)]
pub struct DiagnosticEntry {
    pub name: String,
    pub value: f64,
    pub bound: f64,
    pub kind: BoundKind,
    pub tolerance: f64,
    pub pass: bool,
}

impl DiagnosticEntry {
    fn check(name: String, value: f64, bound: f64, kind: BoundKind, tolerance: f64) -> Self {
        let pass = value.is_finite()
            && match kind {
                BoundKind::AtMost => value <= bound + tolerance,
                BoundKind::AtLeast => value >= bound - tolerance,
            };
        Self {
            name,
            value,
            bound,
            kind,
            tolerance,
            pass,
        }
    }

    /// Slack left inside the (tolerance-widened) bound; negative on failure.
    pub fn margin(&self) -> f64 {
        match self.kind {
            BoundKind::AtMost => self.bound + self.tolerance - self.value,
            BoundKind::AtLeast => self.value - (self.bound - self.tolerance),
        }
    }
}

/// An ordered list of diagnostic entries with a line-per-check rendering.
#[derive(Clone, Debug, Default)]
pub struct DiagnosticsReport {
    entries: Vec<DiagnosticEntry>,
}

impl DiagnosticsReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, entry: DiagnosticEntry) {
        self.entries.push(entry);
    }

    pub fn merge(&mut self, other: DiagnosticsReport) {
        self.entries.extend(other.entries);
    }

    pub fn entries(&self) -> &[DiagnosticEntry] {
        &self.entries
    }

    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn find(&self, name: &str) -> Option<&DiagnosticEntry> {
        self.entries.iter().find(|e| e.name == name)
    }
}

impl fmt::Display for DiagnosticsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            let sym = match e.kind {
                BoundKind::AtMost => "<=",
                BoundKind::AtLeast => ">=",
            };
            writeln!(
                f,
                "{}, value {:.9e}, bound {} {:.9e}, margin {:.3e}, {}",
                e.name,
                e.value,
                sym,
                e.bound,
                e.margin(),
                if e.pass { "PASS" } else { "FAIL" }
            )?;
        }
        Ok(())
    }
}

fn check_curvature_range(alpha: f64) -> Result<()> {
    if !alpha.is_finite() || alpha < -0.5 {
        return Err(Error::BadParameter {
            name: "alpha",
            requirement: "at least -1/2 for the curvature-backed checks",
            value: alpha,
        });
    }
    Ok(())
}

/// Half-width, in the flat coordinate u = 2√y, of the window the kernel
/// quadrature integrates over, in units of √(1-e^{-t}). The transition law
/// started anywhere has flat-coordinate standard deviation ≤ √2·√(1-e^{-t}),
/// so sixteen units keep the neglected tail below e^{-60} of the total.
const FLAT_WINDOW_HALF_WIDTH: f64 = 16.0;

/// ∫ p_t(x, y) g(y) μ^α(dy), i.e. the semigroup applied to g (optionally
/// cut off above: g·1_{y < cap}), evaluated at x.
///
/// The closed-form kernel concentrates in a flat-coordinate window around
/// x; integrating only there keeps the panel count independent of how small
/// t is. Windows touching the origin fall back to the graded full-measure
/// quadrature, which handles the y^α weight.
pub fn semigroup_apply<G: Fn(f64) -> f64>(
    alpha: f64,
    t: f64,
    x: f64,
    cap: Option<f64>,
    policy: &NumericPolicy,
    g: G,
) -> Result<f64> {
    if !t.is_finite() || t <= 0.0 {
        return Err(laguerre_core::error::Error::NonPositiveTime(t).into());
    }
    if !x.is_finite() || x < 0.0 {
        return Err(laguerre_core::error::Error::BadCoordinate { index: 0, value: x }.into());
    }
    let s = -(-t).exp_m1();
    let u = 2.0 * x.sqrt();
    let w = FLAT_WINDOW_HALF_WIDTH * s.sqrt();
    let mut y_hi = (u + w) * (u + w) / 4.0;
    if let Some(c) = cap {
        if c.is_nan() || c <= 0.0 {
            return Err(Error::BadParameter {
                name: "cap",
                requirement: "positive",
                value: c,
            });
        }
        y_hi = y_hi.min(c);
    }
    let integrand = |y: f64| {
        let kernel = match ln_kernel_closed_1d(alpha, t, x, y) {
            Ok(l) => l.exp(),
            Err(_) => f64::NAN,
        };
        kernel * g(y)
    };
    if u <= w {
        return Ok(integrate_mu_below(alpha, y_hi, policy, integrand)?);
    }
    let y_lo = (u - w) * (u - w) / 4.0;
    if y_lo >= y_hi {
        // The whole kernel window sits beyond the cap; what is cut away is
        // bounded by the e^{-60} window tail.
        return Ok(0.0);
    }
    let ln_norm = ln_gamma(alpha + 1.0);
    let weighted = |y: f64| integrand(y) * (alpha * y.ln() - y - ln_norm).exp();
    let rule = GaussLegendre::new(policy.quad_points);
    let mut panels = 4usize;
    let mut previous = f64::NAN;
    loop {
        let mut acc = 0.0;
        let span = y_hi - y_lo;
        for p in 0..panels {
            let a = y_lo + span * p as f64 / panels as f64;
            let b = y_lo + span * (p + 1) as f64 / panels as f64;
            acc += rule.integrate(a, b, weighted);
        }
        let delta = (acc - previous).abs();
        if delta <= policy.quad_tol * acc.abs().max(1.0) {
            return Ok(acc);
        }
        panels *= 2;
        if panels > policy.quad_max_panels {
            return Err(laguerre_core::error::Error::QuadratureStall { panels, delta }.into());
        }
        previous = acc;
    }
}

/// The variance lost by running the semigroup for time t/2 on φ = √·:
/// 2[∫φ² dμ^α − ∫(P_{t/2}φ)² dμ^α], with ∫φ² dμ^α = α + 1 exactly and both
/// remaining integrals by quadrature.
pub fn smoothing_variance_drop(alpha: f64, t: f64) -> Result<f64> {
    check_curvature_range(alpha)?;
    if !t.is_finite() || t <= 0.0 {
        return Err(laguerre_core::error::Error::NonPositiveTime(t).into());
    }
    let inner = NumericPolicy::default().tight_quadrature();
    let outer = NumericPolicy::default();
    let mean_sq = integrate_mu(alpha, &outer, |x| {
        let v = semigroup_apply(alpha, t / 2.0, x, None, &inner, f64::sqrt)
            .unwrap_or(f64::NAN);
        v * v
    })?;
    Ok(2.0 * ((alpha + 1.0) - mean_sq))
}

/// Checks 0 < variance drop ≤ 1 − e^{-t/2} (+10⁻⁶), the contraction that
/// prices the smoothing step.
pub fn diag_variance_drop(alpha: f64, t: f64) -> Result<DiagnosticsReport> {
    let value = smoothing_variance_drop(alpha, t)?;
    let bound = -(-t / 2.0).exp_m1();
    let mut report = DiagnosticsReport::new();
    report.push(DiagnosticEntry::check(
        format!("variance-drop-positive@alpha={alpha},t={t}"),
        value,
        0.0,
        BoundKind::AtLeast,
        0.0,
    ));
    report.push(DiagnosticEntry::check(
        format!("variance-drop-bound@alpha={alpha},t={t}"),
        value,
        bound,
        BoundKind::AtMost,
        1e-6,
    ));
    Ok(report)
}

/// The centered ball indicator pushed through the semigroup:
/// b(y) = [P_t 1_B(y) − m]/m with m = μ^α(B). Checks, by quadrature, that
/// (i) ∫ b dμ^α = 0, (ii) ∫ b² dμ^α ≤ (1−m)/m, and (iii) the spectral-gap
/// decay ∫ (P_s b)² dμ^α ≤ e^{-s} ∫ b² dμ^α, using P_s b = [P_{t+s} 1_B − m]/m.
pub fn diag_ball_bias(alpha: f64, t: f64, s: f64, r: f64) -> Result<DiagnosticsReport> {
    check_curvature_range(alpha)?;
    if !t.is_finite() || t <= 0.0 {
        return Err(laguerre_core::error::Error::NonPositiveTime(t).into());
    }
    if !s.is_finite() || s < 0.0 {
        return Err(Error::BadParameter {
            name: "decay time",
            requirement: "nonnegative and finite",
            value: s,
        });
    }
    let cfg = TruncationConfig::from_radius(r)?;
    let cutoff = cfg.cutoff();
    let m = gamma_p(alpha + 1.0, cutoff)?;
    let inner = NumericPolicy::default().tight_quadrature();
    let outer = NumericPolicy::default();
    let centered = |time: f64, y: f64| {
        let hit = semigroup_apply(alpha, time, y, Some(cutoff), &inner, |_| 1.0)
            .unwrap_or(f64::NAN);
        (hit - m) / m
    };
    let mean = integrate_mu(alpha, &outer, |y| centered(t, y))?;
    let energy = integrate_mu(alpha, &outer, |y| centered(t, y).powi(2))?;
    let decayed = integrate_mu(alpha, &outer, |y| centered(t + s, y).powi(2))?;
    let label = format!("alpha={alpha},t={t},s={s},r={r}");
    let mut report = DiagnosticsReport::new();
    report.push(DiagnosticEntry::check(
        format!("ball-bias-mean-absolute@{label}"),
        mean.abs(),
        0.0,
        BoundKind::AtMost,
        1e-8,
    ));
    report.push(DiagnosticEntry::check(
        format!("ball-bias-energy@{label}"),
        energy,
        (1.0 - m) / m,
        BoundKind::AtMost,
        1e-8,
    ));
    report.push(DiagnosticEntry::check(
        format!("ball-bias-energy-decay@{label}"),
        decayed,
        (-s).exp() * energy,
        BoundKind::AtMost,
        1e-8,
    ));
    Ok(report)
}

/// Gradient contraction for φ = √·: since the field Γ(φ) ≡ 1/4, the bound
/// reads Γ(P_s φ)(x) ≤ e^{-s}/4 (+10⁻⁶) at each grid point; the left side
/// comes from central differences of the quadrature-evaluated P_s φ.
pub fn diag_gradient_contraction(
    alpha: f64,
    s: f64,
    x_grid: &[f64],
) -> Result<DiagnosticsReport> {
    check_curvature_range(alpha)?;
    if !s.is_finite() || s <= 0.0 {
        return Err(laguerre_core::error::Error::NonPositiveTime(s).into());
    }
    let bound = (-s).exp() / 4.0;
    let mut report = DiagnosticsReport::new();
    for &x in x_grid {
        // The kernel's log assembly cancels terms of size ~2x/s, so the
        // integrand carries relative noise ~(x/s)·ε; asking the quadrature
        // for more than that only stalls the refinement.
        let inner = NumericPolicy {
            quad_tol: (4.0 * x / s * f64::EPSILON).max(1e-12),
            ..NumericPolicy::default()
        };
        let value = laguerre_core::operator::carre_du_champ_1d(
            alpha,
            |v| semigroup_apply(alpha, s, v, None, &inner, f64::sqrt).unwrap_or(f64::NAN),
            x,
            // A wider step than the default trades a little truncation error
            // for much less quadrature noise in the difference quotient.
            Some(1e-3),
        )
        .unwrap_or(f64::NAN);
        report.push(DiagnosticEntry::check(
            format!("gradient-contraction@alpha={alpha},s={s},x={x}"),
            value,
            bound,
            BoundKind::AtMost,
            1e-6,
        ));
    }
    Ok(report)
}

/// Multiplicative band, frozen by a calibration sweep over
/// α ∈ [-1/2, 2], t ∈ [0.2, 2], x ∈ (0, 8], inside which the on-diagonal
/// kernel stays relative to the closed comparison shape. The sweep observed
/// ratios in [1.001, 8.48]; the band adds roughly a ±20% guard on each side
/// and makes no monotonicity assumption in α.
pub const DIAGONAL_RATIO_BAND: (f64, f64) = (0.9, 10.0);

/// On-diagonal kernel checks: positivity, the comparison-shape band, and
/// the growth signature p_t(x, x) ↑ along x = 10 → 20 → 40 that witnesses
/// the failure of ultracontractivity at the op's own t.
pub fn diag_kernel_diagonal(alpha: f64, t: f64, x_grid: &[f64]) -> Result<DiagnosticsReport> {
    check_curvature_range(alpha)?;
    let evaluator = KernelEvaluator::new(ModelParams::one_dim(alpha)?);
    let mut report = DiagnosticsReport::new();
    for &x in x_grid {
        let p = evaluator.diagonal(t, &Point::one_dim(x)?)?;
        let shape = phi_comparison(alpha, t, x, x)?;
        let ratio = p / shape;
        report.push(DiagnosticEntry::check(
            format!("diagonal-positive@alpha={alpha},t={t},x={x}"),
            p,
            0.0,
            BoundKind::AtLeast,
            0.0,
        ));
        report.push(DiagnosticEntry::check(
            format!("diagonal-band-low@alpha={alpha},t={t},x={x}"),
            ratio,
            DIAGONAL_RATIO_BAND.0,
            BoundKind::AtLeast,
            0.0,
        ));
        report.push(DiagnosticEntry::check(
            format!("diagonal-band-high@alpha={alpha},t={t},x={x}"),
            ratio,
            DIAGONAL_RATIO_BAND.1,
            BoundKind::AtMost,
            0.0,
        ));
    }
    let probe: Vec<f64> = [10.0, 20.0, 40.0]
        .iter()
        .map(|&x| {
            let point = Point::one_dim(x)?;
            evaluator.diagonal(t, &point)
        })
        .collect::<laguerre_core::error::Result<_>>()?;
    report.push(DiagnosticEntry::check(
        format!("diagonal-growth-20-over-10@alpha={alpha},t={t}"),
        probe[1] / probe[0],
        1.0,
        BoundKind::AtLeast,
        0.0,
    ));
    report.push(DiagnosticEntry::check(
        format!("diagonal-growth-40-over-20@alpha={alpha},t={t}"),
        probe[2] / probe[1],
        1.0,
        BoundKind::AtLeast,
        0.0,
    ));
    Ok(report)
}
