/// Numeric policy shared by kernel evaluation, quadrature, and the
/// finite-difference operators.
///
/// Every tolerance that the higher layers depend on lives here rather than
/// being scattered through call sites.
#[derive(Clone, Debug)]
pub struct NumericPolicy {
    /// Smallest time at which the truncated spectral sum is trusted; below
    /// it the eigenvalue decay is too slow for the configured cutoff.
    pub spectral_t_min: f64,
    /// Total-degree cutoff of the spectral sum.
    pub spectral_cutoff: u32,
    /// Assemble kernel products of exponentials and Bessel factors in log
    /// space. Disabling this is only safe for moderate arguments.
    pub log_domain: bool,
    /// μ^α mass allowed beyond the quadrature window. Kept well below the
    /// quadrature tolerance because polynomially growing integrands amplify
    /// the discarded tail.
    pub quad_tail_mass: f64,
    /// Two successive panel refinements must agree to this tolerance
    /// (absolute, relative once the integral exceeds one).
    pub quad_tol: f64,
    /// Gauss-Legendre points per panel.
    pub quad_points: usize,
    /// Panel-doubling ceiling; exceeding it is reported as non-convergence.
    pub quad_max_panels: usize,
    /// Relative finite-difference step; shrunk near the boundary so stencils
    /// stay inside the orthant.
    pub fd_step: f64,
}

impl Default for NumericPolicy {
    fn default() -> Self {
        Self {
            spectral_t_min: 0.2,
            spectral_cutoff: 60,
            log_domain: true,
            quad_tail_mass: 1e-15,
            quad_tol: 1e-9,
            quad_points: 16,
            quad_max_panels: 4096,
            fd_step: 1e-4,
        }
    }
}

impl NumericPolicy {
    /// Policy with a tighter quadrature tolerance, for checks that compound
    /// two quadrature passes.
    pub fn tight_quadrature(mut self) -> Self {
        self.quad_tol = 1e-11;
        self
    }
}
