//! Shared helpers for the integration suites: seeded random matrices and a
//! Box-Muller normal sampler. Everything here is test-side machinery,
//! independent of the library's computational paths.

use gravlocc::gaussian::{
    matrix_exponential, CMatrix, ModeOrdering, SymplecticForm, SymplecticMatrix,
};
use gravlocc::Tolerances;
use nalgebra::{Complex, DMatrix};
use rand::RngExt;
use rand_chacha::ChaCha12Rng;

#[allow(dead_code)] // helpers are shared across test targets with different usage
pub fn standard_normal(rng: &mut ChaCha12Rng) -> f64 {
    // Box-Muller from two uniforms
    let u1: f64 = rng.random::<f64>().max(1e-300);
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

#[allow(dead_code)]
pub fn random_symmetric(n: usize, scale: f64, rng: &mut ChaCha12Rng) -> DMatrix<f64> {
    let a = DMatrix::from_fn(n, n, |_, _| standard_normal(rng) * scale);
    (&a + a.transpose()) * 0.5
}

#[allow(dead_code)]
pub fn random_hermitian(n: usize, rng: &mut ChaCha12Rng) -> CMatrix {
    let a = CMatrix::from_fn(n, n, |_, _| {
        Complex::new(standard_normal(rng), standard_normal(rng))
    });
    (&a + a.adjoint()).map(|v| v * 0.5)
}

/// Random symplectic matrix `exp(Omega Q)` with symmetric `Q`.
#[allow(dead_code)]
pub fn random_symplectic(
    n: usize,
    scale: f64,
    ordering: ModeOrdering,
    rng: &mut ChaCha12Rng,
    tol: &Tolerances,
) -> SymplecticMatrix {
    let q = random_symmetric(2 * n, scale, rng);
    let omega = SymplecticForm::new(n, ordering).matrix();
    let s = matrix_exponential(&(&omega * &q), tol).expect("bounded generator");
    SymplecticMatrix::new(s, ordering, tol).expect("exponential of Omega Q is symplectic")
}

#[allow(dead_code)]
pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0f64, |a, x| a.max(x.abs()))
}
