//! Special functions the Laguerre model is built from: the log-gamma
//! function, the regularized incomplete gamma pair, the modified Bessel
//! function of the first kind in scaled form, and the generalized Laguerre
//! polynomials with their orthonormal normalization.

pub mod bessel;
pub mod gamma;
pub mod laguerre;

pub use bessel::{bessel_i_scaled, ln_bessel_i_scaled};
pub use gamma::{gamma_p, gamma_q, incomplete_gamma_pair, ln_gamma};
pub use laguerre::{
    laguerre_l, laguerre_l_sequence, laguerre_orthonormal, laguerre_orthonormal_sequence,
    ln_laguerre_norm,
};
