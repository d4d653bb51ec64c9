//! Short-time sensitivity analysis with rigorous remainders.
//!
//! For small `t` the passive bound expands as
//! `1 - max_J sum_l (sqrt(lambda^2 + t^2 s_l^2(J)) - lambda) + Delta`,
//! where `s_l(J)` are the singular values of the off-block `g^{J,Jc}` and
//! `Delta` admits the explicit budget implemented by [`remainder_budget`].
//! In the `lambda -> 0` regime the leading behaviour is `1 - eta t` with the
//! sensitivity `eta = max_J (1/4) ||[g, Xi_J]||_1 = max_J ||g^{J,Jc}||_1`.

use nalgebra::{Complex, DMatrix};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gaussian::{singular_values, trace_norm, CMatrix, SignedModeMask};
use crate::geometry::CouplingMatrix;
use crate::subsets::{admissible_subsets, SubsetPolicy};
use crate::tolerances::Tolerances;

/// Sensitivity `eta` with its maximiser and off-block singular values.
#[derive(Debug, Clone)]
pub struct SensitivityResult {
    /// `max_J ||g^{J,Jc}||_1` (rad/s).
    pub eta: f64,
    /// 0-based maximiser; lexicographically smallest among ties.
    pub maximizing_subset: Vec<usize>,
    /// Singular values of the maximiser's off-block, descending (rad/s).
    pub singular_values: Vec<f64>,
    /// Geometry-free cap `gamma * min{6(n-1), 288 ln(n-1) + 966}` on
    /// `||g||_inf`; None below two modes.
    pub universal_norm_bound: Option<f64>,
    pub subsets_examined: usize,
    pub exhaustive: bool,
}

fn off_block(g: &DMatrix<f64>, mask: &SignedModeMask) -> DMatrix<f64> {
    let rows = mask.indices();
    let cols: Vec<usize> = (0..mask.n).filter(|&j| !mask.contains(j)).collect();
    DMatrix::from_fn(rows.len(), cols.len(), |r, c| g[(rows[r], cols[c])])
}

/// `eta = max_J (1/4) ||[g, Xi_J]||_1`, evaluated through the off-block
/// `g^{J,Jc}`; the quarter-commutator identity is enforced for the winner.
pub fn sensitivity(
    g: &CouplingMatrix,
    policy: &SubsetPolicy,
    tol: &Tolerances,
) -> Result<SensitivityResult> {
    let subsets = admissible_subsets(g.n(), policy, tol.n_exhaustive)?;
    let best = subsets
        .par_iter()
        .map(|mask| {
            let sv = singular_values(&off_block(g.matrix(), mask));
            let eta: f64 = sv.iter().sum();
            (eta, mask.indices(), sv)
        })
        .reduce_with(|a, b| {
            // maximise; ties to the lexicographically smallest subset
            match b.0.partial_cmp(&a.0) {
                Some(std::cmp::Ordering::Greater) => b,
                Some(std::cmp::Ordering::Equal) if b.1 < a.1 => b,
                _ => a,
            }
        })
        .expect("subset list is non-empty");

    let (eta, subset, sv) = best;
    let mask = SignedModeMask::from_indices(g.n(), &subset)?;
    let xi = mask.xi_matrix();
    let commutator = g.matrix() * &xi - &xi * g.matrix();
    let eta_commutator = 0.25 * trace_norm(&commutator);
    let scale = eta.abs().max(1.0);
    if (eta - eta_commutator).abs() > 1e-10 * scale {
        return Err(Error::CrossCheck(format!(
            "off-block trace norm {eta} disagrees with quarter-commutator {eta_commutator}"
        )));
    }
    Ok(SensitivityResult {
        eta,
        maximizing_subset: subset,
        singular_values: sv,
        universal_norm_bound: crate::geometry::g_norm_universal_bound(g.n(), g.gamma_scale())
            .ok(),
        subsets_examined: subsets.len(),
        exhaustive: matches!(policy, SubsetPolicy::Exhaustive),
    })
}

/// Both small-time forms of the bound, remainder excluded:
/// the linear `1 - eta t` and the `lambda`-aware
/// `1 - max_J sum_l (sqrt(lambda^2 + t^2 s_l^2) - lambda)`.
pub fn expansion_upper_bound(
    g: &CouplingMatrix,
    t: f64,
    lambda: f64,
    policy: &SubsetPolicy,
    tol: &Tolerances,
) -> Result<(f64, f64)> {
    if !(t >= 0.0) || !(lambda >= 0.0) {
        return Err(Error::Domain(format!(
            "expansion needs t >= 0 and lambda >= 0, got t={t}, lambda={lambda}"
        )));
    }
    let subsets = admissible_subsets(g.n(), policy, tol.n_exhaustive)?;
    let (linear_drop, aware_drop) = subsets
        .par_iter()
        .map(|mask| {
            let sv = singular_values(&off_block(g.matrix(), mask));
            let linear: f64 = sv.iter().sum();
            let aware: f64 = sv
                .iter()
                .map(|&s| (lambda * lambda + t * t * s * s).sqrt() - lambda)
                .sum();
            (linear, aware)
        })
        .reduce(
            || (f64::NEG_INFINITY, f64::NEG_INFINITY),
            |a, b| (a.0.max(b.0), a.1.max(b.1)),
        );
    Ok((1.0 - linear_drop * t, 1.0 - aware_drop))
}

/// Rigorous remainder budgets for the small-time expansion.
#[derive(Debug, Clone, Copy)]
pub struct RemainderBudget {
    /// Budget evaluated with the exact `||g||_inf`.
    pub delta_exact_g: f64,
    /// Budget with `||g||_inf` replaced by the universal geometric bound,
    /// i.e. `s = gamma t min{6(n-1), 288 ln(n-1) + 966}`.
    pub delta_universal: f64,
    pub n: usize,
    pub lambda: f64,
    pub t: f64,
    pub g_norm: f64,
    pub gamma: f64,
}

fn delta_formula(n: usize, lambda: f64, s: f64) -> f64 {
    let nf = n as f64;
    nf / 2.0 * (lambda * s.exp_m1() + s.exp_m1() - s) + nf * nf / 8.0 * s * s
}

/// `Delta <= n/2 (lambda (e^s - 1) + e^s - 1 - s) + n^2 s^2 / 8` with
/// `s = t ||g||` (exact branch) or the universal-norm substitute.
pub fn remainder_budget(
    n: usize,
    lambda: f64,
    t: f64,
    g_norm: f64,
    gamma: f64,
) -> Result<RemainderBudget> {
    if !(lambda >= 0.0 && t >= 0.0 && g_norm >= 0.0 && gamma >= 0.0) {
        return Err(Error::Domain(
            "remainder budget needs nonnegative lambda, t, norms".into(),
        ));
    }
    let delta_exact_g = delta_formula(n, lambda, t * g_norm);
    let delta_universal = if n >= 2 {
        let cap = 6.0 * (n as f64 - 1.0);
        let log = 288.0 * ((n as f64) - 1.0).ln() + 966.0;
        delta_formula(n, lambda, gamma * t * cap.min(log))
    } else {
        f64::NAN
    };
    Ok(RemainderBudget {
        delta_exact_g,
        delta_universal,
        n,
        lambda,
        t,
        g_norm,
        gamma,
    })
}

/// Legendre chi: `chi_nu(z) = sum_{l>=0} z^(2l+1) / (2l+1)^nu`, `|z| <= 1`.
///
/// Series evaluation to absolute accuracy `tol.chi_series_abs`, terms capped
/// at `tol.chi_term_cap` (the cap only binds for `nu = 2` on the unit
/// circle, where the advertised accuracy would need ~1e12 terms).
pub fn legendre_chi(nu: u32, z: Complex<f64>, tol: &Tolerances) -> Result<Complex<f64>> {
    if nu < 2 {
        return Err(Error::Domain(format!("chi_nu needs nu >= 2, got {nu}")));
    }
    let r = z.norm();
    if r > 1.0 + 1e-14 {
        return Err(Error::Domain(format!("chi_nu needs |z| <= 1, got |z| = {r}")));
    }
    let z2 = z * z;
    let mut power = z; // z^(2l+1)
    let mut sum = Complex::new(0.0, 0.0);
    let on_circle = r > 1.0 - 1e-12;
    for l in 0..tol.chi_term_cap {
        let k = (2 * l + 1) as f64;
        sum += power / k.powi(nu as i32);
        // tail bound: geometric inside the disc, integral comparison on the
        // circle: sum_{m > l} (2m+1)^-nu <= (2l+2)^(1-nu) / (2 (nu-1))
        let tail = if on_circle {
            (k + 1.0).powi(1 - nu as i32) / (2.0 * (nu as f64 - 1.0))
        } else {
            power.norm() * r * r / (1.0 - r * r) / k.powi(nu as i32)
        };
        if tail < tol.chi_series_abs {
            return Ok(sum);
        }
        power *= z2;
    }
    Ok(sum)
}

/// Integrand of the line-geometry spectral constant.
fn zeta_integrand(phi: f64, tol: &Tolerances) -> f64 {
    let w = Complex::from_polar(1.0, -phi / 2.0);
    let chi = legendre_chi(3, w, tol).expect("|w| = 1, nu = 3 is in-domain");
    (Complex::new(1.0, 0.0) + w * chi).norm()
}

#[allow(clippy::too_many_arguments)] // recursion carries its cached endpoints
fn adaptive_simpson<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
            + adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
}

fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    adaptive_simpson(&f, a, b, fa, fm, fb, whole, tol, 40)
}

/// The constant `zeta_L ~= 1.267` governing the linear growth of the line
/// geometry's sensitivity:
/// `(1/2pi) int_{-pi}^{pi} |1 + e^{-i phi/2} chi_3(e^{-i phi/2})| d phi`.
///
/// The integrand is even, so the integral runs over `[0, pi]` and is doubled.
pub fn zeta_line(tol: &Tolerances) -> f64 {
    let half = integrate(
        |phi| zeta_integrand(phi, tol),
        0.0,
        std::f64::consts::PI,
        tol.zeta_abs * std::f64::consts::PI / 2.0,
    );
    2.0 * half / (2.0 * std::f64::consts::PI)
}

/// Builds the `(n/2) x (n/2)` Toeplitz off-block of the equally spaced line
/// with alternating-subset bipartition, entries `2 / |2(i-j) - 1|^3` in units
/// of `gamma`, and returns `||K||_1 / n`. Converges to `zeta_line` as
/// `n -> infinity`. Dense singular values only; capped at `n = 2000`.
pub fn line_trace_norm_ratio(n: usize) -> Result<f64> {
    if n < 4 || !n.is_multiple_of(2) {
        return Err(Error::Domain(format!(
            "line trace-norm ratio needs even n >= 4, got {n}"
        )));
    }
    if n > 2000 {
        return Err(Error::Domain(format!(
            "line trace-norm ratio is dense-solver backed up to n = 2000, got {n}"
        )));
    }
    let m = n / 2;
    let k = DMatrix::from_fn(m, m, |i, j| {
        let d = 2.0 * (i as f64 - j as f64) - 1.0;
        2.0 / d.abs().powi(3)
    });
    Ok(trace_norm(&k) / n as f64)
}

/// Hermitian first-order matrix `lambda Xi_J + (i t / 2) [g, Xi_J]` used by
/// expansion cross-checks.
pub fn first_order_matrix(
    g: &DMatrix<f64>,
    mask: &SignedModeMask,
    t: f64,
    lambda: f64,
) -> CMatrix {
    let n = g.nrows();
    let xi = mask.xi_matrix();
    let comm = g * &xi - &xi * g;
    CMatrix::from_fn(n, n, |r, c| {
        let diag = if r == c { lambda * xi[(r, r)] } else { 0.0 };
        Complex::new(diag, t / 2.0 * comm[(r, c)])
    })
}
