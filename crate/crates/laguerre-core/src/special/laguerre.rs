//! Generalized Laguerre polynomials and the orthonormal eigenbasis of the
//! Laguerre operator.

use crate::real::Real;
use crate::special::gamma::ln_gamma;

/// L_k^{(α)}(x) by the three-term recurrence
/// (k+1) L_{k+1} = (2k + α + 1 - x) L_k - (k + α) L_{k-1}.
pub fn laguerre_l<T: Real>(k: u32, alpha: T, x: T) -> T {
    let mut prev = T::one();
    if k == 0 {
        return prev;
    }
    let mut cur = T::one() + alpha - x;
    for j in 1..k {
        let jj = T::of(j as f64);
        let next = ((T::of(2.0) * jj + alpha + T::one() - x) * cur - (jj + alpha) * prev)
            / (jj + T::one());
        prev = cur;
        cur = next;
    }
    cur
}

/// The values L_0^{(α)}(x), …, L_k^{(α)}(x) in one recurrence sweep.
pub fn laguerre_l_sequence<T: Real>(k: u32, alpha: T, x: T) -> Vec<T> {
    let mut out = Vec::with_capacity(k as usize + 1);
    out.push(T::one());
    if k == 0 {
        return out;
    }
    out.push(T::one() + alpha - x);
    for j in 1..k {
        let jj = T::of(j as f64);
        let next = ((T::of(2.0) * jj + alpha + T::one() - x) * out[j as usize]
            - (jj + alpha) * out[j as usize - 1])
            / (jj + T::one());
        out.push(next);
    }
    out
}

/// ln of the constant c_{k,α} that makes c_{k,α} L_k^{(α)} a unit vector in
/// L²(μ^α): since ∫ (L_k^{(α)})² x^α e^{-x} dx = Γ(k+α+1)/k!, the normalizer
/// under the probability measure is c_{k,α} = √( k! Γ(α+1) / Γ(k+α+1) ).
pub fn ln_laguerre_norm<T: Real>(k: u32, alpha: T) -> T {
    let kk = T::of(k as f64);
    (ln_gamma(kk + T::one()) + ln_gamma(alpha + T::one()) - ln_gamma(kk + alpha + T::one()))
        / T::of(2.0)
}

/// Orthonormal eigenfunction value l_k^α(x) = c_{k,α} L_k^{(α)}(x); the
/// eigenvalue of the Laguerre operator on l_k^α is -k.
pub fn laguerre_orthonormal<T: Real>(k: u32, alpha: T, x: T) -> T {
    ln_laguerre_norm(k, alpha).exp() * laguerre_l(k, alpha, x)
}

/// l_0^α(x), …, l_k^α(x), the orthonormal values for every degree at once.
pub fn laguerre_orthonormal_sequence<T: Real>(k: u32, alpha: T, x: T) -> Vec<T> {
    laguerre_l_sequence(k, alpha, x)
        .into_iter()
        .enumerate()
        .map(|(j, v)| ln_laguerre_norm(j as u32, alpha).exp() * v)
        .collect()
}
