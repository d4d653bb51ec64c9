//! Acceptance gate: one test per shipped criterion, each printing a PASS
//! line with the measured numbers (visible under `--nocapture`; cargo's own
//! per-test ok/FAILED line mirrors the verdict). Tolerances and runtime
//! budgets are pinned here, not configurable.

mod common;

use std::time::{Duration, Instant};

use common::*;
use gravlocc::experiment::{self, ExperimentParams};
use gravlocc::finite_dim::{
    swap_bound, teleportation_threshold_values, FiniteEnsembleSpec, RadialWeight,
};
use gravlocc::gaussian::{self, CovarianceMatrix, ModeOrdering, SignedModeMask};
use gravlocc::geometry::{
    build_coupling_matrix, g_operator_norm, CouplingMatrix, Oscillator, OscillatorArray,
};
use gravlocc::locc::{
    bound_passive, closed_form_two_line, heterodyne_lower_bound, rwa_residual, GaussianEnsemble,
};
use gravlocc::short_time::{
    expansion_upper_bound, line_trace_norm_ratio, remainder_budget, sensitivity, zeta_line,
};
use gravlocc::subsets::SubsetPolicy;
use gravlocc::Tolerances;
use nalgebra::{DMatrix, Vector3};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha12Rng;

fn tol() -> Tolerances {
    Tolerances::default()
}

fn aligned_pair(gamma: f64) -> CouplingMatrix {
    CouplingMatrix::from_matrix(
        DMatrix::from_row_slice(2, 2, &[-2.0 * gamma, 2.0 * gamma, 2.0 * gamma, -2.0 * gamma]),
        gamma,
    )
    .unwrap()
}

fn budget(start: Instant, limit_s: u64, name: &str) {
    let elapsed = start.elapsed();
    assert!(
        elapsed < Duration::from_secs(limit_s),
        "{name} exceeded its {limit_s} s budget: {elapsed:?}"
    );
}

#[test]
fn acceptance_01_two_oscillator_bound() {
    let start = Instant::now();
    let t = tol();

    // exact quarter at the swap point of the closed form
    let gamma = 1.0;
    let v = closed_form_two_line(0.0, gamma, std::f64::consts::FRAC_PI_2 / gamma);
    assert_eq!(v, 0.25, "closed form at the swap point must be exactly 1/4");

    // eigenvalue route vs closed form to 1e-10 on the stated grid
    let g = aligned_pair(gamma);
    let mut worst = 0.0f64;
    for &lambda in &[0.0, 0.1, 0.5, 1.0] {
        let ens = GaussianEnsemble::new(2, lambda).unwrap();
        for k in 0..16 {
            let gt = 0.1 + (std::f64::consts::FRAC_PI_2 - 0.1) * k as f64 / 15.0;
            let b = bound_passive(&g, gt / gamma, &ens, &SubsetPolicy::Exhaustive, &t).unwrap();
            let cf = closed_form_two_line(lambda, gamma, gt / gamma);
            worst = worst.max((b.value - cf).abs());
        }
    }
    assert!(worst <= 1e-10, "worst closed-form deviation {worst:.3e}");
    budget(start, 1, "criterion 1");
    println!("ACCEPTANCE 01 two-oscillator bound: PASS (max |bound - closed form| = {worst:.2e})");
}

#[test]
fn acceptance_02_swap_benchmark() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for d in 2..=8 {
        let value = swap_bound(d).unwrap();
        let closed = 4.0 / ((d as f64 + 1.0) * (d as f64 + 1.0));
        worst = worst.max((value - closed).abs());
        assert!(
            (value - closed).abs() <= 1e-10,
            "swap bound at d={d}: {value} vs {closed}"
        );
    }
    budget(start, 5, "criterion 2");
    println!("ACCEPTANCE 02 swap benchmark: PASS (max deviation from 4/(d+1)^2 = {worst:.2e})");
}

#[test]
fn acceptance_03_teleportation_threshold() {
    let start = Instant::now();
    let t = tol();
    let mut worst = 0.0f64;
    for &lambda in &[0.25, 0.5, 1.0, 2.0] {
        let spec = FiniteEnsembleSpec::PhaseInvariantCoherent {
            weight: RadialWeight::Gaussian { lambda },
            n_max: 20,
        };
        let closed = (1.0 + lambda) / (2.0 + lambda);
        let values = teleportation_threshold_values(&spec, &t).unwrap();
        assert_eq!(values.len(), 21);
        for (n, v) in values.iter().enumerate() {
            worst = worst.max((v - closed).abs());
            assert!(
                (v - closed).abs() <= 1e-9,
                "lambda={lambda}, N={n}: {v} vs {closed}"
            );
        }
    }
    budget(start, 5, "criterion 3");
    println!(
        "ACCEPTANCE 03 teleportation threshold: PASS (max per-N deviation = {worst:.2e})"
    );
}

#[test]
fn acceptance_04_sensitivity_and_line_asymptotics() {
    let start = Instant::now();
    let t = tol();

    // eta = 2 gamma for the aligned pair, to 1e-12
    let g = aligned_pair(1.0);
    let s = sensitivity(&g, &SubsetPolicy::Exhaustive, &t).unwrap();
    assert!((s.eta - 2.0).abs() <= 1e-12, "pair eta = {}", s.eta);
    // and in physical units, relative to the scale
    let arr = OscillatorArray::pair(125e-6, 1.58e-10, 1e-3, &t).unwrap();
    let g_phys = build_coupling_matrix(&arr).unwrap();
    let s_phys = sensitivity(&g_phys, &SubsetPolicy::Exhaustive, &t).unwrap();
    let gamma_phys = g_phys.gamma_scale();
    assert!((s_phys.eta - 2.0 * gamma_phys).abs() <= 1e-12 * gamma_phys);

    let zeta = zeta_line(&t);
    assert!(
        (zeta - 1.267).abs() <= 1e-3,
        "line spectral constant {zeta} vs 1.267 +- 0.001"
    );
    let ratio = line_trace_norm_ratio(400).unwrap();
    assert!(
        (ratio - zeta).abs() / zeta <= 0.02,
        "trace-norm ratio {ratio} vs {zeta}"
    );
    budget(start, 30, "criterion 4");
    println!(
        "ACCEPTANCE 04 sensitivity: PASS (eta_pair = {:.12}, zeta_L = {zeta:.6}, ratio(400) = {ratio:.6})",
        s.eta
    );
}

#[test]
fn acceptance_05_remainder_sandwich() {
    let start = Instant::now();
    let t = tol();
    let line4 = {
        let arr = OscillatorArray::line(4, 1.0, 1.0, 1.0, &t).unwrap();
        build_coupling_matrix(&arr).unwrap()
    };
    let mut violations = 0;
    let mut worst_margin = f64::INFINITY;
    for g in [aligned_pair(1.0), line4] {
        let n = g.n();
        let norm = g_operator_norm(&g);
        for i in 1..=10 {
            let tg = 0.1 * i as f64 / 10.0;
            let time = tg / norm;
            for j in 0..10 {
                let lambda = 0.1 * j as f64 / 9.0;
                let ens = GaussianEnsemble::new(n, lambda).unwrap();
                let exact = bound_passive(&g, time, &ens, &SubsetPolicy::Exhaustive, &t)
                    .unwrap()
                    .value;
                let (_, aware) =
                    expansion_upper_bound(&g, time, lambda, &SubsetPolicy::Exhaustive, &t)
                        .unwrap();
                let delta = remainder_budget(n, lambda, time, norm, g.gamma_scale())
                    .unwrap()
                    .delta_exact_g;
                let gap = (exact - aware).abs();
                if gap > delta {
                    violations += 1;
                }
                worst_margin = worst_margin.min(delta - gap);
            }
        }
    }
    assert_eq!(violations, 0, "sandwich violations on the grid");
    budget(start, 10, "criterion 5");
    println!(
        "ACCEPTANCE 05 remainder sandwich: PASS (0 violations, tightest slack = {worst_margin:.2e})"
    );
}

#[test]
fn acceptance_06_rotating_wave_scaling() {
    let start = Instant::now();
    let t = tol();
    // a seeded random 3-oscillator geometry
    let mut rng = ChaCha12Rng::seed_from_u64(2024);
    let mut oscillators = Vec::new();
    let centers = [
        Vector3::new(0.0, 0.0, 0.0),
        Vector3::new(1.3, 0.4, -0.2),
        Vector3::new(-0.3, 1.1, 0.9),
    ];
    for c in centers {
        let v = Vector3::new(
            standard_normal(&mut rng),
            standard_normal(&mut rng),
            standard_normal(&mut rng),
        );
        oscillators.push(Oscillator { center: c, axis: v / v.norm(), mass: 1.0 });
    }
    let arr = OscillatorArray::new(oscillators, 1.0, &t).unwrap();
    let g = build_coupling_matrix(&arr).unwrap();
    let norm = g_operator_norm(&g);
    // phase-aligned sampling (omega t multiple of 2 pi) isolates the 1/omega
    // envelope from the oscillatory prefactor
    let time = 2.0 * std::f64::consts::PI / norm;
    let residuals: Vec<f64> = [1e3, 1e4, 1e5, 1e6]
        .iter()
        .map(|&k| rwa_residual(&g, k * norm, time, &t).unwrap())
        .collect();
    for pair in residuals.windows(2) {
        let ratio = pair[0] / pair[1];
        assert!(
            ratio >= 10.0 * (1.0 - 1e-3),
            "decade step fell short of tenfold decrease: {ratio}"
        );
    }
    assert!(
        residuals[3] <= 1e-4,
        "residual at omega/||g|| = 1e6 is {}",
        residuals[3]
    );
    budget(start, 5, "criterion 6");
    println!(
        "ACCEPTANCE 06 rotating-wave scaling: PASS (residuals {:.3e} {:.3e} {:.3e} {:.3e})",
        residuals[0], residuals[1], residuals[2], residuals[3]
    );
}

#[test]
fn acceptance_07_parameter_estimates() {
    let start = Instant::now();
    let p = ExperimentParams::sphere_array_reference();

    let m = p.mass.unwrap();
    assert!((m - 1.58e-10).abs() / 1.58e-10 <= 0.01, "sphere mass {m}");

    let resonance = (experiment::constants::G * m / p.separation.unwrap().powi(3)).sqrt();
    assert!(
        (resonance - 7.34e-5).abs() / 7.34e-5 <= 0.01,
        "resonance scale {resonance}"
    );

    let runtime = experiment::runtime_estimate(&p, 0.9).unwrap();
    assert!((runtime - 185.0).abs() / 185.0 <= 0.02, "runtime {runtime}");

    let (low, high) = experiment::lambda_window(&p).unwrap();
    assert!((low - 4.26e-12).abs() / 4.26e-12 <= 0.02, "window low {low}");
    assert!((high - 1e-3).abs() / 1e-3 <= 0.02, "window high {high}");

    budget(start, 1, "criterion 7");
    println!(
        "ACCEPTANCE 07 parameter estimates: PASS (m = {m:.4e} kg, sqrt(Gm/d^3) = {resonance:.4e} Hz, t = {runtime:.1} s, window [{low:.3e}, {high:.3e}])"
    );
}

#[test]
fn acceptance_08_noise_thresholds() {
    let start = Instant::now();
    let p = ExperimentParams::sphere_array_reference();

    let delta = experiment::mass_fluctuation_min_distance(&p).unwrap();
    assert!((delta - 670.0).abs() / 670.0 <= 0.03, "mass-fluctuation distance {delta}");

    let gas = experiment::gas_pressure_temperature_threshold(&p).unwrap();
    assert!(
        (0.5e-15..=2e-15).contains(&gas),
        "gas criterion constant {gas} outside factor 2 of 1e-15"
    );

    let bb = experiment::blackbody_temperature_threshold(&p).unwrap();
    assert!((bb - 11.0).abs() / 11.0 <= 0.10, "black-body threshold {bb}");

    let dbdx = experiment::b_gradient_threshold(&p).unwrap();
    assert!((dbdx - 1.3e-3).abs() / 1.3e-3 <= 0.05, "dB/dx threshold {dbdx}");

    let dedx = experiment::e_gradient_threshold(&p).unwrap();
    assert!((dedx - 3.4e-4).abs() / 3.4e-4 <= 0.05, "dE/dx threshold {dedx}");

    budget(start, 1, "criterion 8");
    println!(
        "ACCEPTANCE 08 noise thresholds: PASS (delta = {delta:.1} m, gas = {gas:.2e} Pa sqrt(K), T_bb = {bb:.2} K, dB/dx = {dbdx:.3e} T/m, dE/dx = {dedx:.3e} V/m^2)"
    );
}

#[test]
fn acceptance_09_pendulum_criteria() {
    let start = Instant::now();
    let p = ExperimentParams::torsion_pendulum_reference();

    let heating = experiment::heating_ratio_threshold(p.run_time.unwrap());
    assert!(
        (0.5e-13..=2e-13).contains(&heating),
        "heating criterion {heating} outside factor 2 of 1e-13"
    );

    let reduced = experiment::cooling_ratio_threshold(&p).unwrap();
    assert!(
        (0.5e-3..=2e-3).contains(&reduced),
        "cooling reduction {reduced} outside factor 2 of 1e-3"
    );

    let gamma = experiment::pendulum_coupling(&p).unwrap();
    let gamma_geo = experiment::pendulum_coupling_geometric(&p).unwrap();
    budget(start, 1, "criterion 9");
    let ok = (gamma - 1.6e-4).abs() / 1.6e-4 <= 0.05;
    if !ok {
        println!(
            "ACCEPTANCE 09 pendulum criteria: FAIL (coupling target 1.6e-4 Hz +- 5% unmet: \
             density closed form = {gamma:.4e} Hz, dumbbell-geometry route = {gamma_geo:.4e} Hz; \
             heating = {heating:.3e} K, cooling reduction = {reduced:.3e} K both reproduced)"
        );
    } else {
        println!(
            "ACCEPTANCE 09 pendulum criteria: PASS (gamma = {gamma:.3e} Hz, heating = {heating:.3e} K, cooling = {reduced:.3e} K)"
        );
    }
    assert!(
        ok,
        "pendulum coupling: closed form 8 pi G rho / (3 omega_I) = {gamma:.4e} Hz and the \
         dumbbell-geometry route = {gamma_geo:.4e} Hz; neither lands on the 1.6e-4 Hz +- 5% \
         target (no unit convention reconciles the reference formula with the reference \
         value; see README, acceptance section)"
    );
}

#[test]
fn acceptance_10_property_suites() {
    let start = Instant::now();
    let t = tol();
    let mut rng = ChaCha12Rng::seed_from_u64(7001);

    // 100 random exponentials: symplectic identity to 1e-9
    for k in 0..100 {
        let n = 1 + k % 4;
        let s = random_symplectic(n, 0.5, ModeOrdering::XxPp, &mut rng, &t);
        let omega = gaussian::SymplecticForm::new(n, ModeOrdering::XxPp).matrix();
        let defect = s.matrix() * &omega * s.matrix().transpose() - &omega;
        assert!(max_abs(&defect) <= 1e-9);
    }

    // spectrum pairing to 1e-10 on 100 random (S, lambda, J)
    for k in 0..100 {
        let n = 2 + k % 3;
        let s = random_symplectic(n, 0.4, ModeOrdering::XxPp, &mut rng, &t);
        let lambda: f64 = rng.random();
        let mask = SignedModeMask::from_indices(n, &[k % (n / 2).max(1)]).unwrap();
        let omega_j = mask.omega_j(ModeOrdering::XxPp);
        let s_inv = s.matrix().clone().try_inverse().unwrap();
        let real_part = (1.0 + lambda) * (&s_inv * &omega_j * s_inv.transpose()) - &omega_j;
        let herm = gaussian::CMatrix::from_fn(2 * n, 2 * n, |r, c| {
            nalgebra::Complex::new(0.0, real_part[(r, c)])
        });
        let vals = gaussian::hermitian_eigenvalues(&herm, &t).unwrap();
        for i in 0..n {
            assert!((vals[i] + vals[2 * n - 1 - i]).abs() <= 1e-10);
        }
    }

    // J vs J^c bound equality to 1e-12
    for _ in 0..20 {
        let gm = random_symmetric(4, 1.0, &mut rng);
        let g = CouplingMatrix::from_matrix(gm, 1.0).unwrap();
        let ens = GaussianEnsemble::new(4, 0.2).unwrap();
        let b_j = bound_passive(
            &g,
            0.7,
            &ens,
            &SubsetPolicy::Explicit(vec![vec![0, 3]]),
            &t,
        )
        .unwrap();
        let b_jc = bound_passive(
            &g,
            0.7,
            &ens,
            &SubsetPolicy::Explicit(vec![vec![1, 2]]),
            &t,
        )
        .unwrap();
        assert!((b_j.value - b_jc.value).abs() <= 1e-12);
    }

    // Williamson congruence invariance to 1e-9
    for _ in 0..30 {
        let n = 2;
        let b = DMatrix::from_fn(2 * n, 2 * n, |_, _| standard_normal(&mut rng));
        let w = &b * b.transpose() + DMatrix::identity(2 * n, 2 * n) * 0.5;
        let cov = CovarianceMatrix::centred(w.clone(), ModeOrdering::ModeWise, &t).unwrap();
        let nu0 = gaussian::williamson_eigenvalues(&cov, &t).unwrap();
        let s = random_symplectic(n, 0.4, ModeOrdering::ModeWise, &mut rng, &t);
        let cov1 = CovarianceMatrix::centred(
            s.matrix() * &w * s.matrix().transpose(),
            ModeOrdering::ModeWise,
            &t,
        )
        .unwrap();
        let nu1 = gaussian::williamson_eigenvalues(&cov1, &t).unwrap();
        for (a, b) in nu0.iter().zip(nu1.iter()) {
            assert!((a - b).abs() <= 1e-9 * a.max(1.0));
        }
    }

    // heterodyne below the bound on the pair grid; equality at the swap
    let g = aligned_pair(1.0);
    for &lambda in &[0.0, 0.1, 0.5, 1.0] {
        let ens = GaussianEnsemble::new(2, lambda).unwrap();
        let het = heterodyne_lower_bound(&ens);
        for k in 0..16 {
            let gt = 0.1 + (std::f64::consts::FRAC_PI_2 - 0.1) * k as f64 / 15.0;
            let b = bound_passive(&g, gt, &ens, &SubsetPolicy::Exhaustive, &t).unwrap();
            assert!(het <= b.value + 1e-12);
        }
    }
    let ens = GaussianEnsemble::new(2, 0.0).unwrap();
    let b = bound_passive(
        &g,
        std::f64::consts::FRAC_PI_2,
        &ens,
        &SubsetPolicy::Exhaustive,
        &t,
    )
    .unwrap();
    assert!((b.value - heterodyne_lower_bound(&ens)).abs() <= 1e-6);

    budget(start, 60, "criterion 10");
    println!("ACCEPTANCE 10 property suites: PASS (symplectic/pairing/complement/Williamson/heterodyne all within stated tolerances)");
}
