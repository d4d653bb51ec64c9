//! LOCC inequalities for Gaussian unitaries on Gaussian coherent-state
//! ensembles.
//!
//! For a symplectic `S` and the isotropic ensemble with inverse variance
//! `lambda`, the bound is
//!
//! `min_J 2^n (1+lambda)^n / prod_l sqrt(2 + lambda + |z_l|)`,
//!
//! where `z_l` runs over the spectrum of
//! `(1+lambda) S^-1 (i Omega_J) S^-T - i Omega_J`. For the passive dynamics
//! `S_eff = exp(t/2 [[0, g], [-g, 0]])` generated by a coupling matrix `g`
//! the `2n` eigenvalues collapse onto `n` values `w_l`, the spectrum of
//! `(1+lambda) e^{i g t/2} Xi_J e^{-i g t/2} - Xi_J`, and the bound becomes
//! `min_J 2^n (1+lambda)^n / prod_l (2 + lambda + |w_l|)`.

use nalgebra::{Complex, DMatrix};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gaussian::{
    self, matrix_exponential, CMatrix, ModeOrdering, SignedModeMask, SymplecticForm,
    SymplecticMatrix,
};
use crate::geometry::CouplingMatrix;
use crate::subsets::{admissible_subsets, better, SubsetPolicy};
use crate::tolerances::Tolerances;

/// The i.i.d. Gaussian ensemble of `n`-mode coherent states with total
/// amplitude variance `1/lambda`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianEnsemble {
    pub n: usize,
    pub lambda: f64,
}

impl GaussianEnsemble {
    /// `lambda = 0` is accepted as the limit ensemble; eigenvalue routes then
    /// substitute the documented floor.
    pub fn new(n: usize, lambda: f64) -> Result<Self> {
        if !(lambda >= 0.0) {
            return Err(Error::Domain(format!("lambda must be >= 0, got {lambda}")));
        }
        Ok(Self { n, lambda })
    }

    pub fn is_limit(&self) -> bool {
        self.lambda == 0.0
    }

    fn effective_lambda(&self, tol: &Tolerances) -> f64 {
        self.lambda.max(tol.lambda_floor)
    }
}

/// Which product formula produced a bound value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    /// `n`-eigenvalue form: `prod_l (2 + lambda + |w_l|)` in the denominator.
    Passive,
    /// `2n`-eigenvalue form: `prod_l sqrt(2 + lambda + |z_l|)`.
    GeneralSymplectic,
}

/// Value of an LOCC inequality together with its provenance.
#[derive(Debug, Clone)]
pub struct BoundResult {
    pub value: f64,
    /// Lexicographically smallest minimiser among ties (0-based modes).
    pub minimizing_subset: Vec<usize>,
    /// `|w_l|` or `|z_l|` of the minimiser, descending.
    pub eigenvalues: Vec<f64>,
    pub kind: BoundKind,
    /// The ensemble parameter as supplied (before any floor).
    pub lambda: f64,
    /// Evolution time, when the bound was driven by `(g, t)`.
    pub time: Option<f64>,
    pub subsets_examined: usize,
    /// False when a non-exhaustive policy was in effect; the value is then an
    /// upper bound over the subsets examined only (still a valid inequality).
    pub exhaustive: bool,
}

impl BoundResult {
    /// Re-evaluate the product formula from the stored eigenvalue moduli.
    pub fn recomputed_value(&self, tol: &Tolerances) -> f64 {
        let lam = self.lambda.max(tol.lambda_floor);
        match self.kind {
            BoundKind::Passive => self
                .eigenvalues
                .iter()
                .map(|&w| 2.0 * (1.0 + lam) / (2.0 + lam + w))
                .product(),
            BoundKind::GeneralSymplectic => self
                .eigenvalues
                .iter()
                .map(|&z| (2.0 * (1.0 + lam) / (2.0 + lam + z)).sqrt())
                .product(),
        }
    }

    /// `J` as a bitstring, mode 0 first.
    pub fn subset_bitstring(&self, n: usize) -> String {
        (0..n)
            .map(|j| if self.minimizing_subset.contains(&j) { '1' } else { '0' })
            .collect()
    }
}

fn subset_minimum<F>(subsets: &[SignedModeMask], eval: F) -> (f64, Vec<usize>, Vec<f64>)
where
    F: Fn(&SignedModeMask) -> (f64, Vec<f64>) + Sync,
{
    let best = subsets
        .par_iter()
        .map(|mask| {
            let (value, eigs) = eval(mask);
            (value, mask.indices(), eigs)
        })
        .reduce_with(|a, b| {
            if better(&(b.0, b.1.clone()), &(a.0, a.1.clone())) {
                b
            } else {
                a
            }
        })
        .expect("subset list is non-empty");
    (best.0, best.1, best.2)
}

/// Unitary `e^{i g t / 2}` from one real-symmetric eigendecomposition of `g`,
/// reused across all subsets.
fn half_phase_unitary(g: &DMatrix<f64>, t: f64) -> CMatrix {
    let n = g.nrows();
    let eig = g.clone().symmetric_eigen();
    let phases: Vec<Complex<f64>> = eig
        .eigenvalues
        .iter()
        .map(|&e| Complex::from_polar(1.0, e * t / 2.0))
        .collect();
    let v = CMatrix::from_fn(n, n, |r, c| Complex::new(eig.eigenvectors[(r, c)], 0.0));
    let mut scaled = v.clone();
    for (mut col, ph) in scaled.column_iter_mut().zip(phases.iter()) {
        col *= *ph;
    }
    &scaled * v.adjoint()
}

/// LOCC inequality for an arbitrary symplectic matrix.
pub fn bound_general_symplectic(
    s: &SymplecticMatrix,
    ens: &GaussianEnsemble,
    policy: &SubsetPolicy,
    tol: &Tolerances,
) -> Result<BoundResult> {
    let n = s.n;
    if ens.n != n {
        return Err(Error::DimensionMismatch(format!(
            "ensemble has {} modes, symplectic matrix has {}",
            ens.n, n
        )));
    }
    let subsets = admissible_subsets(n, policy, tol.n_exhaustive)?;
    let lam = ens.effective_lambda(tol);
    let dim = 2 * n;
    let s_inv = s
        .matrix()
        .clone()
        .lu()
        .try_inverse()
        .ok_or_else(|| Error::Domain("symplectic matrix is numerically singular".into()))?;
    let ordering = s.ordering;

    let (value, subset, eigs) = subset_minimum(&subsets, |mask| {
        let omega_j = mask.omega_j(ordering);
        // (1+lambda) S^-1 Omega_J S^-T - Omega_J, then multiplied by i.
        let real_part = (1.0 + lam) * (&s_inv * &omega_j * s_inv.transpose()) - &omega_j;
        let herm = CMatrix::from_fn(dim, dim, |r, c| Complex::new(0.0, real_part[(r, c)]));
        let z = herm.symmetric_eigen().eigenvalues;
        let mut moduli: Vec<f64> = z.iter().map(|&x| x.abs()).collect();
        moduli.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let value: f64 = moduli
            .iter()
            .map(|&m| (2.0 * (1.0 + lam) / (2.0 + lam + m)).sqrt())
            .product();
        (value, moduli)
    });

    Ok(BoundResult {
        value,
        minimizing_subset: subset,
        eigenvalues: eigs,
        kind: BoundKind::GeneralSymplectic,
        lambda: ens.lambda,
        time: None,
        subsets_examined: subsets.len(),
        exhaustive: matches!(policy, SubsetPolicy::Exhaustive),
    })
}

/// LOCC inequality for the passive dynamics generated by `g` over time `t`.
pub fn bound_passive(
    g: &CouplingMatrix,
    t: f64,
    ens: &GaussianEnsemble,
    policy: &SubsetPolicy,
    tol: &Tolerances,
) -> Result<BoundResult> {
    let n = g.n();
    if ens.n != n {
        return Err(Error::DimensionMismatch(format!(
            "ensemble has {} modes, coupling matrix has {}",
            ens.n, n
        )));
    }
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("time must be >= 0, got {t}")));
    }
    let subsets = admissible_subsets(n, policy, tol.n_exhaustive)?;
    let lam = ens.effective_lambda(tol);
    let u = half_phase_unitary(g.matrix(), t);

    let (value, subset, eigs) = subset_minimum(&subsets, |mask| {
        let signs = mask.xi_signs();
        // (1+lambda) U Xi U^dag - Xi
        let mut scaled = u.clone();
        for (mut col, &s) in scaled.column_iter_mut().zip(signs.iter()) {
            col *= Complex::new((1.0 + lam) * s, 0.0);
        }
        let mut m = &scaled * u.adjoint();
        for (j, &s) in signs.iter().enumerate() {
            m[(j, j)] -= Complex::new(s, 0.0);
        }
        let w = m.symmetric_eigen().eigenvalues;
        let mut moduli: Vec<f64> = w.iter().map(|&x| x.abs()).collect();
        moduli.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let value: f64 = moduli
            .iter()
            .map(|&m| 2.0 * (1.0 + lam) / (2.0 + lam + m))
            .product();
        (value, moduli)
    });

    Ok(BoundResult {
        value,
        minimizing_subset: subset,
        eigenvalues: eigs,
        kind: BoundKind::Passive,
        lambda: ens.lambda,
        time: Some(t),
        subsets_examined: subsets.len(),
        exhaustive: matches!(policy, SubsetPolicy::Exhaustive),
    })
}

/// Effective orthogonal symplectic evolution
/// `S_eff = [[cos(gt/2), sin(gt/2)], [-sin(gt/2), cos(gt/2)]]`
/// in `(x.., p..)` ordering.
pub fn build_seff(g: &CouplingMatrix, t: f64, tol: &Tolerances) -> SymplecticMatrix {
    let n = g.n();
    let eig = g.matrix().clone().symmetric_eigen();
    let v = &eig.eigenvectors;
    let mut cos_m = DMatrix::zeros(n, n);
    let mut sin_m = DMatrix::zeros(n, n);
    for (k, &e) in eig.eigenvalues.iter().enumerate() {
        let (s, c) = (e * t / 2.0).sin_cos();
        let col = v.column(k);
        for r in 0..n {
            for q in 0..n {
                cos_m[(r, q)] += c * col[r] * col[q];
                sin_m[(r, q)] += s * col[r] * col[q];
            }
        }
    }
    let mut s_eff = DMatrix::zeros(2 * n, 2 * n);
    s_eff.view_mut((0, 0), (n, n)).copy_from(&cos_m);
    s_eff.view_mut((0, n), (n, n)).copy_from(&sin_m);
    s_eff.view_mut((n, 0), (n, n)).copy_from(&(-&sin_m));
    s_eff.view_mut((n, n), (n, n)).copy_from(&cos_m);
    SymplecticMatrix::new(s_eff, ModeOrdering::XxPp, tol)
        .expect("cos/sin block matrix is orthogonal symplectic by construction")
}

/// Closed form of the bound for two aligned identical oscillators:
/// `4 (1+lambda)^2 / (2 + lambda + sqrt(lambda^2 + 4 (1+lambda) sin^2(gamma t)))^2`.
pub fn closed_form_two_line(lambda: f64, gamma: f64, t: f64) -> f64 {
    let s = (gamma * t).sin();
    let w = lambda.hypot(2.0 * (1.0 + lambda).sqrt() * s);
    let denom = 2.0 + lambda + w;
    4.0 * (1.0 + lambda) * (1.0 + lambda) / (denom * denom)
}

/// Operator-norm distance between the exact rotating-frame evolution
/// `e^{-omega t Omega} e^{Omega (omega I + g~) t}` and `S_eff(g, t)`;
/// the rotating-wave error, decaying like `||g|| / omega`.
pub fn rwa_residual(g: &CouplingMatrix, omega: f64, t: f64, tol: &Tolerances) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(Error::Domain(format!("omega must be positive, got {omega}")));
    }
    let n = g.n();
    let omega_m = SymplecticForm::new(n, ModeOrdering::XxPp).matrix();
    let mut gen = DMatrix::zeros(2 * n, 2 * n);
    gen.view_mut((0, 0), (n, n)).copy_from(g.matrix());
    let full = &omega_m * (omega * DMatrix::identity(2 * n, 2 * n) + gen);
    let rotate_back = matrix_exponential(&(-omega * t * &omega_m), tol)?;
    let evolved = matrix_exponential(&(full * t), tol)?;
    let frame = &rotate_back * &evolved;
    let diff = frame - build_seff(g, t, tol).matrix();
    Ok(gaussian::operator_norm(&diff))
}

/// Fidelity achieved by mode-wise heterodyne detection, classical
/// communication of the outcomes, and local re-preparation along the known
/// passive dynamics: `((1+lambda)/(2+lambda))^n`.
pub fn heterodyne_lower_bound(ens: &GaussianEnsemble) -> f64 {
    ((1.0 + ens.lambda) / (2.0 + ens.lambda)).powi(ens.n as i32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_coupling_matrix, OscillatorArray};
    use nalgebra::DVector;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn aligned_pair_g(gamma: f64) -> CouplingMatrix {
        let m = DMatrix::from_row_slice(2, 2, &[-2.0 * gamma, 2.0 * gamma, 2.0 * gamma, -2.0 * gamma]);
        CouplingMatrix::from_matrix(m, gamma).unwrap()
    }

    #[test]
    fn identity_dynamics_is_simulable() {
        let t = tol();
        for lambda in [0.0, 0.3, 2.0] {
            let s = SymplecticMatrix::identity(3, ModeOrdering::XxPp);
            let ens = GaussianEnsemble::new(3, lambda).unwrap();
            let b = bound_general_symplectic(&s, &ens, &SubsetPolicy::Exhaustive, &t).unwrap();
            assert!((b.value - 1.0).abs() < 1e-9, "value {}", b.value);
        }
    }

    #[test]
    fn zero_time_bound_is_one() {
        let t = tol();
        let g = aligned_pair_g(1.0);
        let ens = GaussianEnsemble::new(2, 0.37).unwrap();
        let b = bound_passive(&g, 0.0, &ens, &SubsetPolicy::Exhaustive, &t).unwrap();
        assert!((b.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn diagonal_coupling_is_simulable() {
        let t = tol();
        let g = CouplingMatrix::from_matrix(
            DMatrix::from_diagonal(&DVector::from_vec(vec![0.4, -1.3, 2.2])),
            1.0,
        )
        .unwrap();
        let ens = GaussianEnsemble::new(3, 0.05).unwrap();
        let b = bound_passive(&g, 7.7, &ens, &SubsetPolicy::Exhaustive, &t).unwrap();
        assert!((b.value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn pair_bound_matches_closed_form() {
        let t = tol();
        let gamma = 0.8;
        let g = aligned_pair_g(gamma);
        for lambda in [0.0, 0.1, 0.5, 1.0] {
            let ens = GaussianEnsemble::new(2, lambda).unwrap();
            for k in 1..=8 {
                let gt = k as f64 * std::f64::consts::FRAC_PI_2 / 8.0;
                let time = gt / gamma;
                let b = bound_passive(&g, time, &ens, &SubsetPolicy::Exhaustive, &t).unwrap();
                let cf = closed_form_two_line(lambda, gamma, time);
                assert!(
                    (b.value - cf).abs() < 1e-10,
                    "lambda={lambda} gt={gt}: {} vs {cf}",
                    b.value
                );
            }
        }
    }

    #[test]
    fn pair_closed_form_values() {
        // lambda = 0, gamma t = pi/2 -> exactly 1/4
        let v = closed_form_two_line(0.0, 1.0, std::f64::consts::FRAC_PI_2);
        assert_eq!(v, 0.25);
        // any lambda, t = 0 -> 1 (to rounding of the lambda algebra)
        assert!((closed_form_two_line(0.7, 2.0, 0.0) - 1.0).abs() < 1e-15);
        // lambda = 1, gamma t = pi/2 -> 16/36 = 4/9
        let v = closed_form_two_line(1.0, 1.0, std::f64::consts::FRAC_PI_2);
        assert!((v - 4.0 / 9.0).abs() < 1e-14);
    }

    #[test]
    fn pair_limit_value_at_swap_point() {
        let t = tol();
        let g = aligned_pair_g(1.0);
        let ens = GaussianEnsemble::new(2, 0.0).unwrap();
        let b = bound_passive(
            &g,
            std::f64::consts::FRAC_PI_2,
            &ens,
            &SubsetPolicy::Exhaustive,
            &t,
        )
        .unwrap();
        assert!((b.value - 0.25).abs() < 1e-9);
    }

    #[test]
    fn seff_trivial_cases() {
        let t = tol();
        let g = aligned_pair_g(1.0);
        let s = build_seff(&g, 0.0, &t);
        assert!((s.matrix() - DMatrix::<f64>::identity(4, 4)).iter().all(|x| x.abs() < 1e-14));

        let c = 0.9;
        let g1 = CouplingMatrix::from_matrix(DMatrix::from_element(1, 1, c), 1.0).unwrap();
        let s = build_seff(&g1, 2.0, &t);
        let angle = c * 2.0 / 2.0;
        assert!((s.matrix()[(0, 0)] - angle.cos()).abs() < 1e-14);
        assert!((s.matrix()[(0, 1)] - angle.sin()).abs() < 1e-14);
    }

    #[test]
    #[allow(clippy::needless_range_loop)] // r, c mirror the 2x2 block indices
    fn seff_amplitude_map_matches_beam_splitter_phases() {
        // Oracle: the passive map alpha -> (C - i D) alpha must equal the
        // two-mode beam-splitter evolution
        //   e^{i gamma t} [[cos, -i sin], [-i sin, cos]]
        // for the aligned pair; at gamma t = pi/2 it is the exact swap.
        let t = tol();
        let gamma = 1.0;
        let g = aligned_pair_g(gamma);
        for &gt in &[0.2, 0.9, std::f64::consts::FRAC_PI_2] {
            let s = build_seff(&g, gt / gamma, &t);
            let m = s.matrix();
            let phase = Complex::from_polar(1.0, gt);
            let expect = [
                [phase * gt.cos(), phase * Complex::new(0.0, -1.0) * gt.sin()],
                [phase * Complex::new(0.0, -1.0) * gt.sin(), phase * gt.cos()],
            ];
            for r in 0..2 {
                for c in 0..2 {
                    let k = Complex::new(m[(r, c)], -m[(r, 2 + c)]);
                    assert!((k - expect[r][c]).norm() < 1e-12);
                }
            }
        }
        let s = build_seff(&g, std::f64::consts::FRAC_PI_2, &t);
        let swap = DMatrix::from_row_slice(
            4,
            4,
            &[
                0.0, 1.0, 0.0, 0.0, //
                1.0, 0.0, 0.0, 0.0, //
                0.0, 0.0, 0.0, 1.0, //
                0.0, 0.0, 1.0, 0.0,
            ],
        );
        assert!((s.matrix() - swap).iter().all(|x| x.abs() < 1e-12));
    }

    #[test]
    fn rwa_residual_vanishes_for_zero_coupling() {
        let t = tol();
        let g = CouplingMatrix::from_matrix(DMatrix::zeros(2, 2), 1.0).unwrap();
        let r = rwa_residual(&g, 31.0, 1.7, &t).unwrap();
        assert!(r <= 1e-10, "residual {r}");
    }

    #[test]
    fn rwa_residual_scales_inversely_with_omega() {
        let t = tol();
        let arr = OscillatorArray::line(2, 1.0, 1.0, 1.0, &t).unwrap();
        let g = build_coupling_matrix(&arr).unwrap();
        let norm = crate::geometry::g_operator_norm(&g);
        // phase-aligned sampling: omega t is a multiple of 2 pi
        let time = 2.0 * std::f64::consts::PI / norm;
        let r1 = rwa_residual(&g, 1e3 * norm, time, &t).unwrap();
        let r2 = rwa_residual(&g, 1e4 * norm, time, &t).unwrap();
        assert!(
            r1 / r2 > 7.0 && r1 / r2 < 13.0,
            "expected roughly tenfold decrease, got {}",
            r1 / r2
        );
    }

    #[test]
    fn rwa_residual_small_deep_in_the_fast_rotation_regime() {
        // omega / ||g|| = 1e6 at unit dimensionless runtime gamma t = 1
        let t = tol();
        let arr = OscillatorArray::line(2, 1.0, 1.0, 1.0, &t).unwrap();
        let g = build_coupling_matrix(&arr).unwrap();
        let time = 1.0 / g.gamma_scale();
        let omega = 1e6 * crate::geometry::g_operator_norm(&g);
        let r = rwa_residual(&g, omega, time, &t).unwrap();
        assert!(r <= 1e-4, "residual {r}");
    }

    #[test]
    fn heterodyne_examples() {
        assert!((heterodyne_lower_bound(&GaussianEnsemble::new(1, 2.0).unwrap()) - 0.75).abs() < 1e-15);
        assert!((heterodyne_lower_bound(&GaussianEnsemble::new(2, 0.0).unwrap()) - 0.25).abs() < 1e-15);
        assert!((heterodyne_lower_bound(&GaussianEnsemble::new(1, 0.5).unwrap()) - 0.6).abs() < 1e-15);
    }

    #[test]
    fn bound_result_provenance_recomputes() {
        let t = tol();
        let g = aligned_pair_g(0.5);
        let ens = GaussianEnsemble::new(2, 0.2).unwrap();
        let b = bound_passive(&g, 1.1, &ens, &SubsetPolicy::Exhaustive, &t).unwrap();
        assert!((b.value - b.recomputed_value(&t)).abs() < 1e-13);
        assert!(b.value <= 1.0 + 1e-12);
        assert_eq!(b.subset_bitstring(2).len(), 2);
    }
}
