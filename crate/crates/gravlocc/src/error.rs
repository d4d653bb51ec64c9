//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not positive definite (smallest eigenvalue {0:.3e})")]
    NonPositiveDefinite(f64),

    #[error("matrix is not Hermitian (max |H - H^dag| entry {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix is not symplectic (||S Omega S^T - Omega||_max = {0:.3e})")]
    NotSymplectic(f64),

    #[error("matrix is not symmetric (max |A - A^T| entry {0:.3e})")]
    NotSymmetric(f64),

    #[error("matrix exponential overflow: input norm {norm:.3e} exceeds cap {cap:.3e}")]
    Overflow { norm: f64, cap: f64 },

    #[error("index {index} out of range for {n} modes")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("oscillators {0} and {1} have coincident centres")]
    CoincidentCenters(usize, usize),

    #[error("axis of oscillator {index} has norm {norm} (must be unit)")]
    NonUnitAxis { index: usize, norm: f64 },

    #[error(
        "no common frequency: relative spread {spread:.3e} exceeds {tol:.3e}"
    )]
    MissingCommonFrequency { spread: f64, tol: f64 },

    #[error("subset policy yields no admissible mode subsets for n = {0}")]
    EmptySubsetPolicy(usize),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("quadrature failure: {0}")]
    QuadratureFailure(String),

    #[error("teleportation supremum still increasing at N_max = {0}; raise the truncation")]
    TruncationInconclusive(usize),

    #[error("missing parameter `{0}`")]
    MissingParameter(&'static str),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("internal cross-check failed: {0}")]
    CrossCheck(String),
}

pub type Result<T> = std::result::Result<T, Error>;
