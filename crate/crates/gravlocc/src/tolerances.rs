//! Central record of numerical tolerances.
//!
//! All thresholds used for validation and iteration control live here, so a
//! single value governs each kind of comparison everywhere in the crate.

/// Numerical tolerances and iteration caps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Max entry of `S Omega S^T - Omega` (and `|det S - 1|`) accepted as
    /// symplectic.
    pub symplectic: f64,
    /// Max entry of `H - H^dag` accepted as Hermitian.
    pub hermitian: f64,
    /// Target relative accuracy of the scaling-and-squaring matrix
    /// exponential (order-13 rational approximant).
    pub expm_rel: f64,
    /// Inputs with 1-norm above this cap are rejected as `Overflow`.
    pub expm_norm_cap: f64,
    /// Max deviation of an oscillator axis from unit norm.
    pub axis_unit: f64,
    /// Max relative frequency spread accepted when reducing per-oscillator
    /// frequencies to a common one.
    pub freq_spread_rel: f64,
    /// Floor substituted for `lambda` in eigenvalue routes; the closed forms
    /// take the `lambda -> 0` limit exactly, the spectral routes cannot.
    /// Whether this floor can bias eigenvalues for extreme `||g t||` is
    /// untested territory.
    pub lambda_floor: f64,
    /// Absolute truncation error of the Legendre chi series.
    pub chi_series_abs: f64,
    /// Hard cap on the number of chi series terms. At `nu = 2` on the unit
    /// circle the advertised accuracy may be unattainable within the cap; the
    /// achieved tail bound then rules.
    pub chi_term_cap: usize,
    /// Relative accuracy of radial moment quadratures.
    pub quad_rel: f64,
    /// Absolute accuracy of the line-geometry spectral constant integral.
    pub zeta_abs: f64,
    /// Factor operationalising "much less than" in feasibility checks:
    /// `lhs/rhs <= margin` passes, `lhs/rhs <= 1` is marginal, else fail.
    pub margin: f64,
    /// Largest mode count for which subset enumeration is exhaustive.
    pub n_exhaustive: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            symplectic: 1e-10,
            hermitian: 1e-10,
            expm_rel: 1e-12,
            expm_norm_cap: 1e8,
            axis_unit: 1e-12,
            freq_spread_rel: 1e-3,
            lambda_floor: 1e-15,
            chi_series_abs: 1e-12,
            chi_term_cap: 5_000_000,
            quad_rel: 1e-12,
            zeta_abs: 1e-6,
            margin: 0.1,
            n_exhaustive: 20,
        }
    }
}
