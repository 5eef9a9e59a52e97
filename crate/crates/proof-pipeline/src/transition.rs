//! Exact sampling from the model's transition law and the independent
//! mixture representation used to certify it.
//!
//! Started at x, the time-t transition of coordinate i is the two-stage
//! draw K ~ Poisson(x_i e^{-t}/(1-e^{-t})), y_i ~ Gamma(α_i+1+K, 1-e^{-t}):
//! a noncentral-gamma mixture that is exact in law, with no time-step bias.
//! The mixture density is assembled here from gamma and Poisson weights
//! alone — no Bessel evaluation — so it can serve as an independent check
//! of the closed-form kernel.

use laguerre_core::error::Error as CoreError;
use laguerre_core::metric::rho_n_sq;
use laguerre_core::params::{ModelParams, Point};
use laguerre_core::sampling::{gamma_draw, seeds, SampleSet};
use laguerre_core::special::{gamma_p, ln_gamma};
use laguerre_core::stats::mean_stderr;
use rand::Rng;
use rand_distr::{Distribution, Poisson};

use crate::error::{Error, Result};

fn check_time(t: f64) -> Result<()> {
    if !t.is_finite() || t <= 0.0 {
        return Err(CoreError::NonPositiveTime(t).into());
    }
    Ok(())
}

/// One transition draw for a full coordinate vector, consuming randomness
/// from the caller's stream. Coordinates may sit on the boundary (x_i = 0),
/// where the Poisson stage degenerates to zero events.
pub fn transition_sample_coords<R: Rng + ?Sized>(
    rng: &mut R,
    coords: &[f64],
    t: f64,
    params: &ModelParams,
) -> Result<Vec<f64>> {
    check_time(t)?;
    if params.dim() != coords.len() {
        return Err(CoreError::DimensionMismatch {
            expected: params.dim(),
            got: coords.len(),
        }
        .into());
    }
    let scale = -(-t).exp_m1();
    let decay = (-t).exp();
    let mut out = Vec::with_capacity(coords.len());
    for (i, (&x, &alpha)) in coords.iter().zip(params.alpha()).enumerate() {
        if !x.is_finite() || x < 0.0 {
            return Err(CoreError::BadCoordinate { index: i, value: x }.into());
        }
        let lambda = x * decay / scale;
        let events = if lambda > 0.0 {
            Poisson::new(lambda)
                .map_err(|_| CoreError::NonFinite("transition Poisson rate"))?
                .sample(rng)
        } else {
            0.0
        };
        out.push(gamma_draw(rng, alpha + 1.0 + events, scale));
    }
    Ok(out)
}

/// One draw from the time-t transition law started at x, with its own
/// stream derived from the seed.
pub fn transition_sample(x: &Point, t: f64, params: &ModelParams, seed: u64) -> Result<Point> {
    let mut rng = seeds::stream(seed);
    let coords = transition_sample_coords(&mut rng, x.coords(), t, params)?;
    Ok(Point::new(coords)?)
}

/// Lebesgue density of the one-coordinate transition law at y, assembled
/// directly from the Poisson-gamma mixture:
/// Σ_k e^{-λ} λ^k/k! · y^{α+k} e^{-y/s} / (Γ(α+1+k) s^{α+1+k}),
/// with s = 1-e^{-t} and λ = x e^{-t}/s.
///
/// Only log-gamma enters; the closed-form kernel's Bessel factor does not,
/// so agreement between the two is a genuine two-sided check.
pub fn transition_density_series(alpha: f64, t: f64, x: f64, y: f64) -> Result<f64> {
    check_time(t)?;
    if !x.is_finite() || x < 0.0 {
        return Err(CoreError::BadCoordinate { index: 0, value: x }.into());
    }
    if !y.is_finite() || y <= 0.0 {
        return Err(CoreError::BadCoordinate { index: 0, value: y }.into());
    }
    let s = -(-t).exp_m1();
    let lambda = x * (-t).exp() / s;
    let ln_y = y.ln();
    let ln_s = s.ln();
    if lambda == 0.0 {
        let ln_pdf = alpha * ln_y - y / s - ln_gamma(alpha + 1.0) - (alpha + 1.0) * ln_s;
        return Ok(ln_pdf.exp());
    }
    let ln_lambda = lambda.ln();
    // The k-th term peaks near max(λ, √(λ y / s)); pad by ten standard
    // deviations plus a constant so the discarded tail sits ~e^{-50} below
    // the peak.
    let peak = lambda.max((lambda * y / s).sqrt());
    let k_cap = (peak + 10.0 * (peak + 1.0).sqrt() + 80.0).ceil() as usize;
    let mut ln_terms = Vec::with_capacity(k_cap + 1);
    let mut ln_max = f64::NEG_INFINITY;
    for k in 0..=k_cap {
        let kf = k as f64;
        let ln_term = -lambda + kf * ln_lambda - ln_gamma(kf + 1.0) + (alpha + kf) * ln_y
            - y / s
            - ln_gamma(alpha + 1.0 + kf)
            - (alpha + 1.0 + kf) * ln_s;
        ln_max = ln_max.max(ln_term);
        ln_terms.push(ln_term);
    }
    if ln_max == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    let mut sum = 0.0;
    for ln_term in ln_terms {
        sum += (ln_term - ln_max).exp();
    }
    Ok(ln_max.exp() * sum)
}

/// Distribution function of the one-coordinate transition law:
/// Σ_k Poisson(λ)[k] · P(α+1+k, y/s). The Poisson tail bounds the truncation
/// error by 10⁻¹³ because each gamma factor lies in [0, 1].
pub fn transition_mixture_cdf(alpha: f64, t: f64, x: f64, y: f64) -> Result<f64> {
    check_time(t)?;
    if !y.is_finite() || y < 0.0 {
        return Err(CoreError::BadCoordinate { index: 0, value: y }.into());
    }
    if y == 0.0 {
        return Ok(0.0);
    }
    let s = -(-t).exp_m1();
    let lambda = x * (-t).exp() / s;
    if lambda == 0.0 {
        return Ok(gamma_p(alpha + 1.0, y / s)?);
    }
    let ln_lambda = lambda.ln();
    let mut cdf = 0.0;
    let mut covered = 0.0;
    for k in 0..1_000_000usize {
        let kf = k as f64;
        let weight = (-lambda + kf * ln_lambda - ln_gamma(kf + 1.0)).exp();
        cdf += weight * gamma_p(alpha + 1.0 + kf, y / s)?;
        covered += weight;
        if 1.0 - covered < 1e-13 && kf >= lambda {
            return Ok(cdf.min(1.0));
        }
    }
    Err(Error::SeriesConvergence("transition mixture cdf"))
}

/// Monte Carlo mean and standard error of the squared intrinsic distance
/// ϱ_N(X_j, Y_j)² between each sample point and one transition draw started
/// from it — the cost of the diagonal smoothing coupling. Point j uses the
/// stream derived from (seed, j), so the estimate is order-independent.
pub fn smoothing_coupling_cost(
    samples: &SampleSet,
    t: f64,
    params: &ModelParams,
    seed: u64,
) -> Result<(f64, f64)> {
    if samples.n() < 2 {
        return Err(Error::BadParameter {
            name: "sample size",
            requirement: "at least 2 for a standard error",
            value: samples.n() as f64,
        });
    }
    let mut costs = Vec::with_capacity(samples.n());
    for (j, point) in samples.points().enumerate() {
        let mut rng = seeds::stream(seeds::derive(seed, &[j as u64]));
        let moved = transition_sample_coords(&mut rng, point, t, params)?;
        costs.push(rho_n_sq(point, &moved)?);
    }
    Ok(mean_stderr(&costs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_coordinate_draws_a_pure_gamma() {
        let params = ModelParams::one_dim(0.5).unwrap();
        let mut rng = seeds::stream(7);
        for _ in 0..100 {
            let y = transition_sample_coords(&mut rng, &[0.0], 0.4, &params).unwrap();
            assert!(y[0] > 0.0 && y[0].is_finite());
        }
    }

    #[test]
    fn nonpositive_times_are_refused() {
        let params = ModelParams::one_dim(0.0).unwrap();
        let x = Point::one_dim(1.0).unwrap();
        assert!(transition_sample(&x, 0.0, &params, 1).is_err());
        assert!(transition_sample(&x, -1.0, &params, 1).is_err());
        assert!(transition_density_series(0.0, f64::NAN, 1.0, 1.0).is_err());
    }

    #[test]
    fn series_with_zero_rate_is_the_gamma_density() {
        // x = 0 kills the Poisson stage: the density is Gamma(α+1, s).
        let alpha = 0.25;
        let t: f64 = 0.9;
        let s = 1.0 - (-t).exp();
        for &y in &[0.05, 0.4, 1.3] {
            let series = transition_density_series(alpha, t, 0.0, y).unwrap();
            let exact = (y / s).powf(alpha) * (-y / s).exp()
                / (ln_gamma(alpha + 1.0).exp() * s);
            assert!((series - exact).abs() <= 1e-13 * exact.max(1.0));
        }
    }

    #[test]
    fn mixture_cdf_interpolates_zero_to_one() {
        let cdf_lo = transition_mixture_cdf(0.0, 0.7, 2.0, 1e-9).unwrap();
        let cdf_mid = transition_mixture_cdf(0.0, 0.7, 2.0, 2.0).unwrap();
        let cdf_hi = transition_mixture_cdf(0.0, 0.7, 2.0, 60.0).unwrap();
        assert!(cdf_lo < 1e-6);
        assert!(cdf_mid > 0.3 && cdf_mid < 0.9);
        assert!(cdf_hi > 1.0 - 1e-10);
        assert!(transition_mixture_cdf(0.0, 0.7, 2.0, 0.0).unwrap() == 0.0);
    }

    #[test]
    fn coupling_cost_needs_two_points() {
        let params = ModelParams::one_dim(0.0).unwrap();
        let samples = SampleSet::from_rows(1, 3, vec![1.0]).unwrap();
        assert!(smoothing_coupling_cost(&samples, 0.5, &params, 4).is_err());
    }
}
