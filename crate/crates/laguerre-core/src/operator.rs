//! Finite-difference evaluation of the Laguerre generator and its carré du
//! champ.

use crate::error::{Error, Result};
use crate::params::{ModelParams, Point};

/// Central-difference step at coordinate value x: relative once x is of
/// order one, absolute near zero, and shrunk so the widest stencil x ± 2h
/// stays inside the orthant.
pub fn fd_step(x: f64, rel: f64) -> f64 {
    let h = rel * x.max(1.0);
    if x - 2.0 * h <= 0.0 {
        x / 4.0
    } else {
        h
    }
}

fn check(params: &ModelParams, x: &Point) -> Result<()> {
    if params.dim() != x.dim() {
        return Err(Error::DimensionMismatch {
            expected: params.dim(),
            got: x.dim(),
        });
    }
    Ok(())
}

/// ℒ^α f(x) = Σ_i [ x_i ∂²_i f(x) + (α_i + 1 - x_i) ∂_i f(x) ] by central
/// differences; `step` overrides the policy-derived per-coordinate step.
pub fn generator_apply<F: Fn(&[f64]) -> f64>(
    params: &ModelParams,
    f: F,
    x: &Point,
    step: Option<f64>,
) -> Result<f64> {
    check(params, x)?;
    let rel = step.unwrap_or(1e-4);
    let mut buf = x.coords().to_vec();
    let center = f(&buf);
    if !center.is_finite() {
        return Err(Error::NonFinite("generator target"));
    }
    let mut acc = 0.0;
    for i in 0..buf.len() {
        let xi = x.coords()[i];
        let h = fd_step(xi, rel);
        buf[i] = xi + h;
        let up = f(&buf);
        buf[i] = xi - h;
        let down = f(&buf);
        buf[i] = xi;
        let first = (up - down) / (2.0 * h);
        let second = (up - 2.0 * center + down) / (h * h);
        acc += xi * second + (params.alpha()[i] + 1.0 - xi) * first;
    }
    if !acc.is_finite() {
        return Err(Error::NonFinite("generator value"));
    }
    Ok(acc)
}

/// Carré du champ Γ^α(f)(x) = Σ_i x_i (∂_i f(x))².
pub fn carre_du_champ<F: Fn(&[f64]) -> f64>(
    params: &ModelParams,
    f: F,
    x: &Point,
    step: Option<f64>,
) -> Result<f64> {
    check(params, x)?;
    let rel = step.unwrap_or(1e-4);
    let mut buf = x.coords().to_vec();
    let mut acc = 0.0;
    for i in 0..buf.len() {
        let xi = x.coords()[i];
        let h = fd_step(xi, rel);
        buf[i] = xi + h;
        let up = f(&buf);
        buf[i] = xi - h;
        let down = f(&buf);
        buf[i] = xi;
        let first = (up - down) / (2.0 * h);
        acc += xi * first * first;
    }
    if !acc.is_finite() {
        return Err(Error::NonFinite("carré du champ value"));
    }
    Ok(acc)
}

/// One-dimensional convenience wrappers.
pub fn generator_apply_1d<F: Fn(f64) -> f64>(
    alpha: f64,
    f: F,
    x: f64,
    step: Option<f64>,
) -> Result<f64> {
    let params = ModelParams::one_dim(alpha)?;
    let point = Point::one_dim(x)?;
    generator_apply(&params, |v| f(v[0]), &point, step)
}

pub fn carre_du_champ_1d<F: Fn(f64) -> f64>(
    alpha: f64,
    f: F,
    x: f64,
    step: Option<f64>,
) -> Result<f64> {
    let params = ModelParams::one_dim(alpha)?;
    let point = Point::one_dim(x)?;
    carre_du_champ(&params, |v| f(v[0]), &point, step)
}
