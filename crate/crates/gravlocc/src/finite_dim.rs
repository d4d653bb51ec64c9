//! Finite-dimensional benchmarks: maximal-eigenvalue relative bounds, the
//! swap-operator bound on Haar product ensembles, and teleportation classical
//! thresholds for phase-invariant coherent-state ensembles.

use nalgebra::{Complex, DMatrix};

use crate::error::{Error, Result};
use crate::gaussian::{hermitian_eigenvalues, CMatrix};
use crate::tolerances::Tolerances;

/// Phase-invariant radial weight `p(|alpha|)` on the complex plane,
/// normalised as a probability density in `d^2 alpha`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadialWeight {
    /// `p(alpha) = (lambda / pi) e^{-lambda |alpha|^2}`.
    Gaussian { lambda: f64 },
    /// Uniform on the circle `|alpha| = radius` (the vacuum point ensemble
    /// for `radius = 0`).
    Ring { radius: f64 },
}

/// Ensemble specification for the finite-dimensional benchmarks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FiniteEnsembleSpec {
    /// Independent Haar-random local pure states in dimension `d`.
    HaarProduct { dim: usize },
    /// Coherent states with phase-invariant radial weight, truncated at
    /// total photon number `n_max`.
    PhaseInvariantCoherent { weight: RadialWeight, n_max: usize },
}

/// `d_max(X || Y) = lambda_max(Y^{-1/2} X Y^{-1/2})`, the smallest `kappa`
/// with `X <= kappa Y`. `X` Hermitian, `Y` Hermitian positive definite.
pub fn d_max(x: &CMatrix, y: &CMatrix, tol: &Tolerances) -> Result<f64> {
    if x.nrows() != y.nrows() || x.ncols() != y.ncols() || x.nrows() != x.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "d_max needs square matrices of equal size, got {}x{} and {}x{}",
            x.nrows(),
            x.ncols(),
            y.nrows(),
            y.ncols()
        )));
    }
    let defect = (x - x.adjoint()).iter().fold(0.0f64, |a, v| a.max(v.norm()));
    if defect > tol.hermitian {
        return Err(Error::NotHermitian(defect));
    }
    let eig_y = {
        let defect = (y - y.adjoint()).iter().fold(0.0f64, |a, v| a.max(v.norm()));
        if defect > tol.hermitian {
            return Err(Error::NotHermitian(defect));
        }
        (y + y.adjoint()).map(|v| v * 0.5).symmetric_eigen()
    };
    let min_eig = eig_y.eigenvalues.iter().fold(f64::INFINITY, |a, &v| a.min(v));
    if min_eig <= tol.hermitian {
        return Err(Error::NonPositiveDefinite(min_eig));
    }
    let mut scaled = eig_y.eigenvectors.clone();
    for (mut col, &e) in scaled.column_iter_mut().zip(eig_y.eigenvalues.iter()) {
        col *= Complex::new(1.0 / e.sqrt(), 0.0);
    }
    let y_inv_sqrt = &scaled * eig_y.eigenvectors.adjoint();
    let m = &y_inv_sqrt * x * &y_inv_sqrt;
    let vals = hermitian_eigenvalues(&m, tol)?;
    Ok(*vals.last().expect("non-empty spectrum"))
}

/// Average of independent Haar pairs `int d psi  psi (x) psi` on
/// `C^d (x) C^d`: the normalised projector `2 S / (d(d+1))` onto the
/// symmetric subspace, with `S = (I + F)/2` built from the flip `F`.
pub fn haar_pair_average(d: usize) -> Result<DMatrix<f64>> {
    if d < 2 {
        return Err(Error::Domain(format!("haar_pair_average needs d >= 2, got {d}")));
    }
    let dim = d * d;
    let mut flip = DMatrix::zeros(dim, dim);
    for i in 0..d {
        for j in 0..d {
            flip[(j * d + i, i * d + j)] = 1.0;
        }
    }
    let sym = 0.5 * (DMatrix::identity(dim, dim) + flip);
    Ok(sym * (2.0 / (d as f64 * (d as f64 + 1.0))))
}

/// LOCC bound for simulating the swap on independent Haar pairs:
/// `d^2 lambda_max(A (x) A)` with `A = 2S/(d(d+1))`, which the symmetric
/// projector construction pins to `4 / (d+1)^2`. The eigenvalue route and
/// the closed form are cross-checked to 1e-10.
pub fn swap_bound(d: usize) -> Result<f64> {
    let a = haar_pair_average(d)?;
    let eigs = a.clone().symmetric_eigen().eigenvalues;
    // spectrum of A (x) A is the set of pairwise products
    let mut lambda_max = f64::NEG_INFINITY;
    for &x in eigs.iter() {
        for &y in eigs.iter() {
            lambda_max = lambda_max.max(x * y);
        }
    }
    let value = (d * d) as f64 * lambda_max;
    let closed = 4.0 / ((d as f64 + 1.0) * (d as f64 + 1.0));
    if (value - closed).abs() > 1e-10 {
        return Err(Error::CrossCheck(format!(
            "swap bound eigenvalue route {value} deviates from closed form {closed}"
        )));
    }
    Ok(value)
}

/// Adaptive-doubling radial integral `int_0^inf f(r) dr` for integrands with
/// Gaussian damping: the cut radius doubles until the integrand is dead, the
/// grid then refines until the relative change is below `tol.quad_rel`.
fn radial_quadrature<F: Fn(f64) -> f64>(f: F, tol: &Tolerances) -> Result<f64> {
    let mut r_cut = 6.0;
    while f(r_cut).abs() > 1e-300 && r_cut < 1e4 {
        r_cut *= 2.0;
    }
    // composite Simpson with refinement
    let simpson = |m: usize| -> f64 {
        let h = r_cut / m as f64;
        let mut sum = f(0.0) + f(r_cut);
        for k in 1..m {
            let w = if k % 2 == 1 { 4.0 } else { 2.0 };
            sum += w * f(k as f64 * h);
        }
        sum * h / 3.0
    };
    let mut m = 64;
    let mut prev = simpson(m);
    for _ in 0..16 {
        m *= 2;
        let next = simpson(m);
        let scale = next.abs().max(1e-300);
        if (next - prev).abs() / scale < tol.quad_rel {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::QuadratureFailure(format!(
        "radial moment integral did not converge to {} within {m} panels",
        tol.quad_rel
    )))
}

fn ln_factorial(n: usize) -> f64 {
    (1..=n).map(|k| (k as f64).ln()).sum()
}

/// Moment families of a phase-invariant weight:
/// `mu_N = (1/N!) int d^2 alpha p(alpha) e^{-2|alpha|^2} |alpha|^{2N}` and
/// `nu_k = (1/k!) int d^2 alpha p(alpha) e^{-|alpha|^2} |alpha|^{2k}`,
/// for `N, k <= n_max`.
pub fn teleportation_threshold_moments(
    spec: &FiniteEnsembleSpec,
    tol: &Tolerances,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let (weight, n_max) = match spec {
        FiniteEnsembleSpec::PhaseInvariantCoherent { weight, n_max } => (*weight, *n_max),
        FiniteEnsembleSpec::HaarProduct { .. } => {
            return Err(Error::Domain(
                "moments are defined for coherent-state ensembles only".into(),
            ))
        }
    };
    if n_max < 1 {
        return Err(Error::Domain("moment truncation needs n_max >= 1".into()));
    }
    let mut mu = Vec::with_capacity(n_max + 1);
    let mut nu = Vec::with_capacity(n_max + 1);
    for order in 0..=n_max {
        let lnf = ln_factorial(order);
        match weight {
            RadialWeight::Gaussian { lambda } => {
                if !(lambda > 0.0) {
                    return Err(Error::Domain(format!(
                        "Gaussian radial weight needs lambda > 0, got {lambda}"
                    )));
                }
                // d^2 alpha = 2 pi r dr on phase-invariant integrands
                let mu_int = radial_quadrature(
                    |r| {
                        let ln_val = (lambda / std::f64::consts::PI).ln()
                            + (-(2.0 + lambda) * r * r)
                            + (2.0 * order as f64) * r.max(1e-300).ln()
                            - lnf;
                        2.0 * std::f64::consts::PI * r * ln_val.exp()
                    },
                    tol,
                )?;
                let nu_int = radial_quadrature(
                    |r| {
                        let ln_val = (lambda / std::f64::consts::PI).ln()
                            + (-(1.0 + lambda) * r * r)
                            + (2.0 * order as f64) * r.max(1e-300).ln()
                            - lnf;
                        2.0 * std::f64::consts::PI * r * ln_val.exp()
                    },
                    tol,
                )?;
                mu.push(mu_int);
                nu.push(nu_int);
            }
            RadialWeight::Ring { radius } => {
                let r2 = radius * radius;
                let ln_r2n = if order == 0 {
                    0.0
                } else if radius == 0.0 {
                    f64::NEG_INFINITY
                } else {
                    (order as f64) * r2.ln()
                };
                mu.push((-2.0 * r2 + ln_r2n - lnf).exp());
                nu.push((-r2 + ln_r2n - lnf).exp());
            }
        }
    }
    Ok((mu, nu))
}

/// Per-N values `mu_N sum_k binom(N,k) / nu_k` whose supremum is the
/// teleportation classical threshold.
#[allow(clippy::needless_range_loop)] // indices mirror the moment orders N, k
pub fn teleportation_threshold_values(
    spec: &FiniteEnsembleSpec,
    tol: &Tolerances,
) -> Result<Vec<f64>> {
    let (mu, nu) = teleportation_threshold_moments(spec, tol)?;
    let n_max = mu.len() - 1;
    let mut values = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let mut sum = 0.0;
        let mut binom = 1.0f64;
        for k in 0..=n {
            if nu[k] <= 0.0 {
                return Err(Error::Domain(format!(
                    "nu_{k} vanishes; the threshold ansatz is undefined"
                )));
            }
            sum += binom / nu[k];
            binom *= (n - k) as f64 / (k + 1) as f64;
        }
        values.push(mu[n] * sum);
    }
    Ok(values)
}

/// Teleportation classical threshold
/// `sup_N mu_N sum_{k<=N} binom(N,k)/nu_k`, truncated at the ensemble's `n_max`.
///
/// Errors with `TruncationInconclusive` when the running supremum is still
/// strictly increasing at the truncation edge.
pub fn teleportation_threshold_bound(
    spec: &FiniteEnsembleSpec,
    tol: &Tolerances,
) -> Result<f64> {
    let values = teleportation_threshold_values(spec, tol)?;
    let n_max = values.len() - 1;
    let sup = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if n_max >= 1 {
        let last = values[n_max];
        let prev = values[n_max - 1];
        let rising = last >= sup - 1e-12 * sup.abs() && last > prev * (1.0 + 1e-9);
        if rising {
            return Err(Error::TruncationInconclusive(n_max));
        }
    }
    Ok(sup)
}
