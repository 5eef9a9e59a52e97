//! Quantile function of the Gamma(shape, 1) law, the per-coordinate marginal
//! of the model measure after shifting the exponent by one.

use crate::error::{Error, Result};
use laguerre_core::special::{gamma_p, ln_gamma};

/// x with P(shape, x) = p, solved to |Δx| ≤ 10⁻¹³·max(1, x) by Newton steps
/// kept inside a shrinking bracket; out-of-bracket proposals fall back to
/// bisection, so convergence never depends on the starting point.
pub fn gamma_quantile(p: f64, shape: f64) -> Result<f64> {
    gamma_quantile_from(p, shape, shape.max(1e-3))
}

/// Same root search started from a caller-supplied guess; increasing sweeps
/// of p can pass the previous root to cut the iteration count.
pub fn gamma_quantile_from(p: f64, shape: f64, guess: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::BadProbability(p));
    }
    if !shape.is_finite() || shape <= 0.0 {
        return Err(Error::BadShape(shape));
    }
    let ln_norm = ln_gamma(shape);
    let mut lo = 0.0f64;
    let mut hi = shape.max(1.0);
    for _ in 0..300 {
        if gamma_p(shape, hi)? >= p {
            break;
        }
        lo = hi;
        hi *= 2.0;
    }
    if gamma_p(shape, hi)? < p {
        return Err(Error::QuantileConvergence);
    }
    let mut x = if guess.is_finite() && guess > lo && guess < hi {
        guess
    } else {
        0.5 * (lo + hi)
    };
    for _ in 0..200 {
        let f = gamma_p(shape, x)? - p;
        if f > 0.0 {
            hi = x;
        } else if f < 0.0 {
            lo = x;
        } else {
            return Ok(x);
        }
        let ln_pdf = (shape - 1.0) * x.ln() - x - ln_norm;
        let mut next = x - f * (-ln_pdf).exp();
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        let delta = (next - x).abs();
        x = next;
        if delta <= 1e-13 * x.max(1.0) {
            return Ok(x);
        }
    }
    Err(Error::QuantileConvergence)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_quantiles_are_closed_form() {
        // Shape 1 is the unit exponential law.
        let x = gamma_quantile(1.0 - (-1.0f64).exp(), 1.0).unwrap();
        assert!((x - 1.0).abs() <= 1e-12, "got {x}");
        let median = gamma_quantile(0.5, 1.0).unwrap();
        assert!((median - std::f64::consts::LN_2).abs() <= 1e-12, "got {median}");
    }

    #[test]
    fn half_shape_root_matches_a_bisection_oracle() {
        // Independent bisection on the same CDF, driven far past the
        // requested tolerance.
        let (mut lo, mut hi) = (0.0f64, 10.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if gamma_p(0.5, mid).unwrap() < 0.3 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let oracle = 0.5 * (lo + hi);
        let x = gamma_quantile(0.3, 0.5).unwrap();
        assert!((x - oracle).abs() <= 1e-12, "{x} vs {oracle}");
    }

    #[test]
    fn round_trip_through_the_cdf() {
        for &shape in &[0.5, 0.75, 1.0, 2.0, 7.5] {
            for k in 1..40 {
                let p = k as f64 / 40.0;
                let x = gamma_quantile(p, shape).unwrap();
                let back = gamma_p(shape, x).unwrap();
                assert!((back - p).abs() <= 1e-11, "shape={shape} p={p}: {back}");
            }
        }
    }

    #[test]
    fn monotone_in_p_and_warm_start_agrees() {
        let shape = 0.5;
        let mut prev = 0.0f64;
        for k in 1..100 {
            let p = k as f64 / 100.0;
            let cold = gamma_quantile(p, shape).unwrap();
            let warm = gamma_quantile_from(p, shape, prev.max(1e-3)).unwrap();
            assert!(cold > prev, "quantile not increasing at p={p}");
            assert!((cold - warm).abs() <= 1e-11 * cold.max(1.0));
            prev = cold;
        }
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(gamma_quantile(0.0, 1.0), Err(Error::BadProbability(_))));
        assert!(matches!(gamma_quantile(1.0, 1.0), Err(Error::BadProbability(_))));
        assert!(matches!(gamma_quantile(0.5, 0.0), Err(Error::BadShape(_))));
    }
}
