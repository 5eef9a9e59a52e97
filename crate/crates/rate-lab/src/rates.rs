//! Rate regimes, predicted rate values, and log-log slope fitting.
//!
//! The expected squared distance between the empirical measure of n points
//! and the model decays at a rate whose shape is decided by s = α_⋆ + N.
//! Four branches cover s > 1, s = 1, s ∈ (1/2, 1), and s = 1/2; the two
//! equality branches are decided on exact rationals, never on float sums.

use serde::{Deserialize, Serialize};

use crate::alpha::{Exact, ExactAlpha};
use crate::error::{Error, Result};

/// The four rate branches, keyed by s = α_⋆ + N.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    /// s > 1: rate log n / n^{1/s}.
    #[serde(rename = "log-over-power")]
    LogOverPower,
    /// s = 1: rate (log n)² / n.
    #[serde(rename = "log-squared-over-n")]
    LogSquaredOverN,
    /// 1/2 < s < 1: rate (log n)^{2s−1} / n.
    #[serde(rename = "log-power-over-n")]
    LogPowerOverN,
    /// s = 1/2: rate log log n / n.
    #[serde(rename = "log-log-over-n")]
    LogLogOverN,
}

impl Regime {
    /// Stable text tag used in CSV output and CLI surfaces.
    pub fn label(self) -> &'static str {
        match self {
            Regime::LogOverPower => "log-over-power",
            Regime::LogSquaredOverN => "log-squared-over-n",
            Regime::LogPowerOverN => "log-power-over-n",
            Regime::LogLogOverN => "log-log-over-n",
        }
    }

    /// Human-readable formula for help text and summaries.
    pub fn formula(self) -> &'static str {
        match self {
            Regime::LogOverPower => "log n / n^{1/s}",
            Regime::LogSquaredOverN => "(log n)^2 / n",
            Regime::LogPowerOverN => "(log n)^{2s-1} / n",
            Regime::LogLogOverN => "log log n / n",
        }
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Decide the rate branch from the exact value of s = α_⋆ + N.
///
/// Requires every shape ≥ −1/2, which forces s ≥ N/2 ≥ 1/2, so the four
/// branches are exhaustive.
pub fn classify(alpha: &ExactAlpha) -> Result<Regime> {
    if let Some((index, value)) = alpha.below_half() {
        return Err(Error::RegimeDomain {
            index,
            value: value.to_string(),
        });
    }
    let s = alpha.sum_plus_dim();
    let one = Exact::from_integer(1);
    let half = Exact::new(1, 2);
    debug_assert!(s >= half);
    Ok(if s > one {
        Regime::LogOverPower
    } else if s == one {
        Regime::LogSquaredOverN
    } else if s > half {
        Regime::LogPowerOverN
    } else {
        Regime::LogLogOverN
    })
}

/// The regime tag and the constant-free predicted rate value at n.
///
/// n ≥ 3 keeps log log n positive, so every branch returns a positive value.
pub fn predicted_rate(alpha: &ExactAlpha, n: usize) -> Result<(Regime, f64)> {
    if n < 3 {
        return Err(Error::SmallCount(n));
    }
    let regime = classify(alpha)?;
    let nf = n as f64;
    let ln = nf.ln();
    let s = ratio_f64(alpha.sum_plus_dim());
    let value = match regime {
        Regime::LogOverPower => ln / nf.powf(1.0 / s),
        Regime::LogSquaredOverN => ln * ln / nf,
        Regime::LogPowerOverN => ln.powf(2.0 * s - 1.0) / nf,
        Regime::LogLogOverN => ln.ln() / nf,
    };
    Ok((regime, value))
}

fn ratio_f64(r: Exact) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().expect("ratio fits in f64 range")
}

/// Ordinary least squares of log value on log n.
///
/// Returns the slope and its standard error estimated from the residuals.
/// Requires at least three pairs, strictly positive finite values, and at
/// least two distinct counts.
pub fn fit_loglog_slope(pairs: &[(usize, f64)]) -> Result<(f64, f64)> {
    if pairs.len() < 3 {
        return Err(Error::Fit("at least 3 points"));
    }
    let mut xs = Vec::with_capacity(pairs.len());
    let mut ys = Vec::with_capacity(pairs.len());
    for &(n, value) in pairs {
        if n == 0 {
            return Err(Error::Fit("positive counts"));
        }
        if !value.is_finite() || value <= 0.0 {
            return Err(Error::Fit("strictly positive finite values"));
        }
        xs.push((n as f64).ln());
        ys.push(value.ln());
    }
    let k = xs.len() as f64;
    let x_mean = xs.iter().sum::<f64>() / k;
    let y_mean = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - x_mean) * (x - x_mean)).sum();
    if sxx <= 0.0 {
        return Err(Error::Fit("at least two distinct counts"));
    }
    let sxy: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - x_mean) * (y - y_mean))
        .sum();
    let slope = sxy / sxx;
    let intercept = y_mean - slope * x_mean;
    let rss: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    let sigma_sq = rss / (k - 2.0);
    Ok((slope, (sigma_sq / sxx).sqrt()))
}

/// Envelope consistency of measured means against a predicted rate shape.
///
/// The prediction carries no constant, so the multiplier K is calibrated at
/// the first grid point (K = mean₀ / predicted₀) and every later point must
/// satisfy mean ≤ K·predicted + 3·stderr. The 3σ buffer absorbs Monte Carlo
/// noise without weakening the shape comparison.
#[derive(Clone, Copy, Debug)]
pub struct EnvelopeCheck {
    /// Multiplier calibrated at the first grid point.
    pub constant: f64,
    /// Whether every point respected the envelope.
    pub ok: bool,
    /// Largest observed mean / (K·predicted) ratio across the grid.
    pub worst_ratio: f64,
}

pub fn envelope_check(means: &[f64], stderrs: &[f64], predicted: &[f64]) -> Result<EnvelopeCheck> {
    if means.is_empty() || means.len() != stderrs.len() || means.len() != predicted.len() {
        return Err(Error::Fit("matching nonempty mean/stderr/prediction lists"));
    }
    if !(predicted[0] > 0.0) || !means[0].is_finite() {
        return Err(Error::Fit("positive first prediction and finite first mean"));
    }
    let constant = means[0] / predicted[0];
    let mut ok = true;
    let mut worst_ratio = f64::NEG_INFINITY;
    for i in 0..means.len() {
        let cap = constant * predicted[i];
        if means[i] > cap + 3.0 * stderrs[i] {
            ok = false;
        }
        if cap > 0.0 {
            worst_ratio = worst_ratio.max(means[i] / cap);
        }
    }
    Ok(EnvelopeCheck {
        constant,
        ok,
        worst_ratio,
    })
}
