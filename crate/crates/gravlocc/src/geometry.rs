//! Gravitational coupling matrix of a 3D arrangement of one-dimensional
//! oscillators.
//!
//! Each oscillator `j` is a mass `m_j` confined to a line through `R0_j`
//! with unit direction `n_j`, in a harmonic well of angular frequency
//! `omega`. Pairwise Newtonian attraction, Taylor-expanded to second order
//! about the centres, produces the symmetric coupling matrix `g` (rad/s):
//!
//! diagonals `g_jj = sum_{l != j} G m_l / (d_jl^3 omega) * (1 - 3 cos^2 theta_jl)`,
//! off-diagonals
//! `g_jk = -G sqrt(m_j m_k) / (d_jk^3 omega) * (cos phi_jk + 3 cos theta_jk cos theta_kj)`.

use nalgebra::{DMatrix, Vector3};

use crate::error::{Error, Result};
use crate::experiment::constants::G;
use crate::tolerances::Tolerances;

/// One oscillator: centre (m), oscillation axis (unit), mass (kg).
#[derive(Debug, Clone, PartialEq)]
pub struct Oscillator {
    pub center: Vector3<f64>,
    pub axis: Vector3<f64>,
    pub mass: f64,
}

/// A validated 3D arrangement with a common angular frequency.
#[derive(Debug, Clone)]
pub struct OscillatorArray {
    oscillators: Vec<Oscillator>,
    omega: f64,
    per_oscillator_omega: Option<Vec<f64>>,
}

impl OscillatorArray {
    /// Validates unit axes, positive masses, distinct centres, `omega > 0`.
    pub fn new(oscillators: Vec<Oscillator>, omega: f64, tol: &Tolerances) -> Result<Self> {
        if oscillators.len() < 2 {
            return Err(Error::Domain(
                "an oscillator array needs at least 2 oscillators".into(),
            ));
        }
        if !(omega > 0.0) {
            return Err(Error::Domain(format!("omega must be positive, got {omega}")));
        }
        for (i, o) in oscillators.iter().enumerate() {
            let norm = o.axis.norm();
            if (norm - 1.0).abs() > tol.axis_unit {
                return Err(Error::NonUnitAxis { index: i, norm });
            }
            if !(o.mass > 0.0) {
                return Err(Error::Domain(format!(
                    "oscillator {i} has non-positive mass {}",
                    o.mass
                )));
            }
        }
        for i in 0..oscillators.len() {
            for j in (i + 1)..oscillators.len() {
                if (oscillators[i].center - oscillators[j].center).norm() == 0.0 {
                    return Err(Error::CoincidentCenters(i, j));
                }
            }
        }
        Ok(Self {
            oscillators,
            omega,
            per_oscillator_omega: None,
        })
    }

    /// Heterogeneous frequencies are accepted only when the relative spread
    /// stays below `tol.freq_spread_rel`; the mean then acts as the common
    /// frequency.
    pub fn with_frequencies(
        oscillators: Vec<Oscillator>,
        omegas: Vec<f64>,
        tol: &Tolerances,
    ) -> Result<Self> {
        if omegas.len() != oscillators.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} oscillators but {} frequencies",
                oscillators.len(),
                omegas.len()
            )));
        }
        if omegas.iter().any(|&w| !(w > 0.0)) {
            return Err(Error::Domain("per-oscillator frequencies must be positive".into()));
        }
        let mean = omegas.iter().sum::<f64>() / omegas.len() as f64;
        let spread = omegas
            .iter()
            .map(|&w| (w - mean).abs())
            .fold(0.0, f64::max)
            / mean;
        if spread > tol.freq_spread_rel {
            return Err(Error::MissingCommonFrequency {
                spread,
                tol: tol.freq_spread_rel,
            });
        }
        let mut arr = Self::new(oscillators, mean, tol)?;
        arr.per_oscillator_omega = Some(omegas);
        Ok(arr)
    }

    /// `n` identical oscillators equally spaced on the x axis, all
    /// oscillating along it.
    pub fn line(n: usize, spacing: f64, mass: f64, omega: f64, tol: &Tolerances) -> Result<Self> {
        if !(spacing > 0.0) {
            return Err(Error::Domain(format!("spacing must be positive, got {spacing}")));
        }
        let oscillators = (0..n)
            .map(|k| Oscillator {
                center: Vector3::new(k as f64 * spacing, 0.0, 0.0),
                axis: Vector3::x(),
                mass,
            })
            .collect();
        Self::new(oscillators, omega, tol)
    }

    /// Two aligned identical oscillators at distance `d`.
    pub fn pair(d: f64, mass: f64, omega: f64, tol: &Tolerances) -> Result<Self> {
        Self::line(2, d, mass, omega, tol)
    }

    pub fn n(&self) -> usize {
        self.oscillators.len()
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn oscillators(&self) -> &[Oscillator] {
        &self.oscillators
    }

    pub fn per_oscillator_omega(&self) -> Option<&[f64]> {
        self.per_oscillator_omega.as_deref()
    }

    fn distance(&self, j: usize, k: usize) -> f64 {
        (self.oscillators[k].center - self.oscillators[j].center).norm()
    }

    /// Coupling scale `gamma = G max_j m_j / (min_{j!=k} d_jk^3 * omega)`.
    pub fn gamma_scale(&self) -> f64 {
        let max_mass = self
            .oscillators
            .iter()
            .map(|o| o.mass)
            .fold(f64::NEG_INFINITY, f64::max);
        let mut min_d = f64::INFINITY;
        for j in 0..self.n() {
            for k in (j + 1)..self.n() {
                min_d = min_d.min(self.distance(j, k));
            }
        }
        G * max_mass / (min_d.powi(3) * self.omega)
    }
}

/// Angles `(theta_jk, theta_kj, phi_jk)` of the pair `(j, k)`, all in
/// `[0, pi]`:
/// `cos theta_jk = n_j . d_jk`, `-cos theta_kj = n_k . d_jk`,
/// `cos phi_jk = n_j . n_k`, with `d_jk` the unit vector from `j` to `k`.
pub fn pair_angles(arr: &OscillatorArray, j: usize, k: usize) -> Result<(f64, f64, f64)> {
    let n = arr.n();
    if j >= n {
        return Err(Error::IndexOutOfRange { index: j, n });
    }
    if k >= n {
        return Err(Error::IndexOutOfRange { index: k, n });
    }
    if j == k {
        return Err(Error::Domain("pair angles need two distinct oscillators".into()));
    }
    let d_vec = arr.oscillators[k].center - arr.oscillators[j].center;
    let d = d_vec.norm();
    if d == 0.0 {
        return Err(Error::CoincidentCenters(j, k));
    }
    let d_hat = d_vec / d;
    let clamp = |x: f64| x.clamp(-1.0, 1.0);
    let theta_jk = clamp(arr.oscillators[j].axis.dot(&d_hat)).acos();
    let theta_kj = clamp(-arr.oscillators[k].axis.dot(&d_hat)).acos();
    let phi_jk = clamp(arr.oscillators[j].axis.dot(&arr.oscillators[k].axis)).acos();
    Ok((theta_jk, theta_kj, phi_jk))
}

/// The `n x n` symmetric coupling matrix (rad/s) plus its scale `gamma`.
#[derive(Debug, Clone)]
pub struct CouplingMatrix {
    matrix: DMatrix<f64>,
    gamma_scale: f64,
}

impl CouplingMatrix {
    /// Wrap an externally supplied symmetric coupling matrix.
    pub fn from_matrix(matrix: DMatrix<f64>, gamma_scale: f64) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "coupling matrix must be square, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let asym = (&matrix - matrix.transpose())
            .iter()
            .fold(0.0f64, |a, x| a.max(x.abs()));
        if asym > 0.0 {
            return Err(Error::NotSymmetric(asym));
        }
        Ok(Self { matrix, gamma_scale })
    }

    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn gamma_scale(&self) -> f64 {
        self.gamma_scale
    }
}

/// Build the coupling matrix of an array. Symmetric by construction: each
/// off-diagonal entry is computed once and mirrored.
pub fn build_coupling_matrix(arr: &OscillatorArray) -> Result<CouplingMatrix> {
    let n = arr.n();
    let omega = arr.omega();
    let mut g = DMatrix::zeros(n, n);
    for j in 0..n {
        for k in (j + 1)..n {
            let (theta_jk, theta_kj, phi_jk) = pair_angles(arr, j, k)?;
            let d = arr.distance(j, k);
            let mj = arr.oscillators()[j].mass;
            let mk = arr.oscillators()[k].mass;
            let val = -G * (mj * mk).sqrt() / (d.powi(3) * omega)
                * (phi_jk.cos() + 3.0 * theta_jk.cos() * theta_kj.cos());
            g[(j, k)] = val;
            g[(k, j)] = val;
        }
    }
    for j in 0..n {
        let mut diag = 0.0;
        for l in 0..n {
            if l == j {
                continue;
            }
            let (theta_jl, _, _) = pair_angles(arr, j, l)?;
            let d = arr.distance(j, l);
            let ml = arr.oscillators()[l].mass;
            diag += G * ml / (d.powi(3) * omega) * (1.0 - 3.0 * theta_jl.cos().powi(2));
        }
        g[(j, j)] = diag;
    }
    CouplingMatrix::from_matrix(g, arr.gamma_scale())
}

/// Exact operator norm of `g`: the largest eigenvalue magnitude.
pub fn g_operator_norm(g: &CouplingMatrix) -> f64 {
    g.matrix()
        .clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .fold(0.0f64, |a, &x| a.max(x.abs()))
}

/// Geometry-free bound `gamma * min{6(n-1), 288 ln(n-1) + 966}`, valid for
/// every 3D arrangement whose minimal distance sets `gamma`.
pub fn g_norm_universal_bound(n: usize, gamma_scale: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::Domain("universal norm bound needs n >= 2".into()));
    }
    let linear = 6.0 * (n as f64 - 1.0);
    let log = 288.0 * ((n as f64) - 1.0).ln() + 966.0;
    Ok(gamma_scale * linear.min(log))
}

/// Same bound derived directly from an array.
pub fn g_norm_universal_bound_for(arr: &OscillatorArray) -> Result<f64> {
    g_norm_universal_bound(arr.n(), arr.gamma_scale())
}

/// Euler rotation applied to every centre and axis, and a translation;
/// used by invariance tests and custom configs.
pub fn transform_array(
    arr: &OscillatorArray,
    rotation: &nalgebra::Rotation3<f64>,
    translation: &Vector3<f64>,
    tol: &Tolerances,
) -> Result<OscillatorArray> {
    let oscillators = arr
        .oscillators()
        .iter()
        .map(|o| Oscillator {
            center: rotation * o.center + translation,
            axis: rotation * o.axis,
            mass: o.mass,
        })
        .collect();
    OscillatorArray::new(oscillators, arr.omega(), tol)
}
