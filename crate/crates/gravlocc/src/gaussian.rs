//! Symplectic and matrix-analysis primitives.
//!
//! Mode orderings: the canonical internal ordering is `XxPp`, i.e.
//! `(x_1..x_n, p_1..p_n)`, in which the block formulas of the passive bound
//! are stated. The interleaved `ModeWise` ordering `(x_1, p_1, .., x_n, p_n)`
//! exists at API boundaries via an exact permutation similarity.

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{Error, Result};
use crate::tolerances::Tolerances;

pub type CMatrix = DMatrix<Complex<f64>>;

/// Layout of the canonical operator vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeOrdering {
    /// `(x_1, p_1, x_2, p_2, ...)`
    ModeWise,
    /// `(x_1, .., x_n, p_1, .., p_n)`
    XxPp,
}

/// The standard symplectic form on `n` modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymplecticForm {
    pub n: usize,
    pub ordering: ModeOrdering,
}

impl SymplecticForm {
    pub fn new(n: usize, ordering: ModeOrdering) -> Self {
        Self { n, ordering }
    }

    /// The matrix Omega: real, antisymmetric, `Omega^2 = -I`.
    pub fn matrix(&self) -> DMatrix<f64> {
        let n = self.n;
        let mut m = DMatrix::zeros(2 * n, 2 * n);
        match self.ordering {
            ModeOrdering::ModeWise => {
                for j in 0..n {
                    m[(2 * j, 2 * j + 1)] = 1.0;
                    m[(2 * j + 1, 2 * j)] = -1.0;
                }
            }
            ModeOrdering::XxPp => {
                for j in 0..n {
                    m[(j, n + j)] = 1.0;
                    m[(n + j, j)] = -1.0;
                }
            }
        }
        m
    }
}

/// Index permutation sending mode-wise coordinates to `XxPp` coordinates:
/// `perm[k]` is the mode-wise index stored at `XxPp` slot `k`.
pub fn modewise_to_xxpp_permutation(n: usize) -> Vec<usize> {
    let mut perm = Vec::with_capacity(2 * n);
    for j in 0..n {
        perm.push(2 * j); // x_j
    }
    for j in 0..n {
        perm.push(2 * j + 1); // p_j
    }
    perm
}

/// Conjugate `m` (given in `from` ordering) into `to` ordering. Exact entry
/// permutation; involutive.
pub fn reorder_matrix(
    m: &DMatrix<f64>,
    from: ModeOrdering,
    to: ModeOrdering,
) -> DMatrix<f64> {
    if from == to {
        return m.clone();
    }
    let n = m.nrows() / 2;
    let perm = modewise_to_xxpp_permutation(n);
    let dim = 2 * n;
    let mut out = DMatrix::zeros(dim, dim);
    match (from, to) {
        (ModeOrdering::ModeWise, ModeOrdering::XxPp) => {
            for r in 0..dim {
                for c in 0..dim {
                    out[(r, c)] = m[(perm[r], perm[c])];
                }
            }
        }
        (ModeOrdering::XxPp, ModeOrdering::ModeWise) => {
            for r in 0..dim {
                for c in 0..dim {
                    out[(perm[r], perm[c])] = m[(r, c)];
                }
            }
        }
        _ => unreachable!(),
    }
    out
}

/// Reorder a phase-space vector between the two layouts.
pub fn reorder_vector(
    v: &DVector<f64>,
    from: ModeOrdering,
    to: ModeOrdering,
) -> DVector<f64> {
    if from == to {
        return v.clone();
    }
    let n = v.len() / 2;
    let perm = modewise_to_xxpp_permutation(n);
    let mut out = DVector::zeros(2 * n);
    match (from, to) {
        (ModeOrdering::ModeWise, ModeOrdering::XxPp) => {
            for k in 0..2 * n {
                out[k] = v[perm[k]];
            }
        }
        (ModeOrdering::XxPp, ModeOrdering::ModeWise) => {
            for k in 0..2 * n {
                out[perm[k]] = v[k];
            }
        }
        _ => unreachable!(),
    }
    out
}

/// A real `2n x 2n` matrix `S` with `S Omega S^T = Omega`.
#[derive(Debug, Clone)]
pub struct SymplecticMatrix {
    pub n: usize,
    pub ordering: ModeOrdering,
    entries: DMatrix<f64>,
}

impl SymplecticMatrix {
    /// Validates `||S Omega S^T - Omega||_max` and `|det S - 1|` against
    /// `tol.symplectic`.
    pub fn new(
        entries: DMatrix<f64>,
        ordering: ModeOrdering,
        tol: &Tolerances,
    ) -> Result<Self> {
        let dim = entries.nrows();
        if dim != entries.ncols() || dim == 0 || !dim.is_multiple_of(2) {
            return Err(Error::DimensionMismatch(format!(
                "symplectic matrix must be square and even-dimensional, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        let n = dim / 2;
        let omega = SymplecticForm::new(n, ordering).matrix();
        let defect = &entries * &omega * entries.transpose() - &omega;
        let worst = defect.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        if worst > tol.symplectic {
            return Err(Error::NotSymplectic(worst));
        }
        let det = entries.clone().lu().determinant();
        if (det - 1.0).abs() > tol.symplectic.max(1e3 * f64::EPSILON * dim as f64) {
            return Err(Error::NotSymplectic((det - 1.0).abs()));
        }
        Ok(Self { n, ordering, entries })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn to_ordering(&self, ordering: ModeOrdering) -> SymplecticMatrix {
        SymplecticMatrix {
            n: self.n,
            ordering,
            entries: reorder_matrix(&self.entries, self.ordering, ordering),
        }
    }

    pub fn identity(n: usize, ordering: ModeOrdering) -> Self {
        Self {
            n,
            ordering,
            entries: DMatrix::identity(2 * n, 2 * n),
        }
    }
}

/// A subset `J` of the modes `{0, .., n-1}`, carrier of the signed matrices
/// `Xi_J` (diagonal, +1 on `J`, -1 on the complement) and `Omega_J`
/// (mode-wise blocks `+-(0,1;-1,0)` by membership).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedModeMask {
    pub n: usize,
    members: Vec<bool>,
}

impl SignedModeMask {
    pub fn from_indices(n: usize, indices: &[usize]) -> Result<Self> {
        let mut members = vec![false; n];
        for &i in indices {
            if i >= n {
                return Err(Error::IndexOutOfRange { index: i, n });
            }
            members[i] = true;
        }
        Ok(Self { n, members })
    }

    pub fn contains(&self, mode: usize) -> bool {
        self.members[mode]
    }

    pub fn indices(&self) -> Vec<usize> {
        (0..self.n).filter(|&j| self.members[j]).collect()
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `J -> J^c`; negates both `Xi_J` and `Omega_J`.
    pub fn complement(&self) -> Self {
        Self {
            n: self.n,
            members: self.members.iter().map(|&b| !b).collect(),
        }
    }

    /// `Xi_J`: `n x n` diagonal, `+1` on members, `-1` elsewhere.
    pub fn xi_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |r, c| {
            if r == c {
                if self.members[r] {
                    1.0
                } else {
                    -1.0
                }
            } else {
                0.0
            }
        })
    }

    /// Signs of `Xi_J` as a vector.
    pub fn xi_signs(&self) -> Vec<f64> {
        self.members.iter().map(|&b| if b { 1.0 } else { -1.0 }).collect()
    }

    /// `Omega_J`: block structure `+(0,1;-1,0)` on members, the negative on
    /// the rest. In `XxPp` ordering this is `[[0, Xi_J], [-Xi_J, 0]]`.
    pub fn omega_j(&self, ordering: ModeOrdering) -> DMatrix<f64> {
        let n = self.n;
        let mut m = DMatrix::zeros(2 * n, 2 * n);
        let signs = self.xi_signs();
        match ordering {
            ModeOrdering::ModeWise => {
                for j in 0..n {
                    m[(2 * j, 2 * j + 1)] = signs[j];
                    m[(2 * j + 1, 2 * j)] = -signs[j];
                }
            }
            ModeOrdering::XxPp => {
                for j in 0..n {
                    m[(j, n + j)] = signs[j];
                    m[(n + j, j)] = -signs[j];
                }
            }
        }
        m
    }

    /// Bitstring form, mode 0 first; `'1'` marks membership.
    pub fn bitstring(&self) -> String {
        self.members.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

/// Partial-transpose signature `Sigma_J`: diagonal `+-1`, with `-1` exactly on
/// the momentum rows of modes in `J`. Conjugating a covariance matrix by it
/// (and flipping the mean) implements the Gaussian partial transpose.
pub fn partial_transpose_signature(
    mask: &SignedModeMask,
    ordering: ModeOrdering,
) -> DMatrix<f64> {
    let n = mask.n;
    let mut m = DMatrix::identity(2 * n, 2 * n);
    for j in 0..n {
        if mask.contains(j) {
            match ordering {
                ModeOrdering::ModeWise => m[(2 * j + 1, 2 * j + 1)] = -1.0,
                ModeOrdering::XxPp => m[(n + j, n + j)] = -1.0,
            }
        }
    }
    m
}

/// Covariance matrix `W` (vacuum = identity) with mean vector `delta`.
/// `W` must be symmetric positive definite; it need not describe a valid
/// state (partial transposes are allowed).
#[derive(Debug, Clone)]
pub struct CovarianceMatrix {
    pub n: usize,
    pub ordering: ModeOrdering,
    matrix: DMatrix<f64>,
    mean: DVector<f64>,
}

impl CovarianceMatrix {
    pub fn new(
        matrix: DMatrix<f64>,
        mean: DVector<f64>,
        ordering: ModeOrdering,
        tol: &Tolerances,
    ) -> Result<Self> {
        let dim = matrix.nrows();
        if dim != matrix.ncols() || !dim.is_multiple_of(2) || dim == 0 || mean.len() != dim {
            return Err(Error::DimensionMismatch(format!(
                "covariance must be 2n x 2n with matching mean, got {}x{} and {}",
                matrix.nrows(),
                matrix.ncols(),
                mean.len()
            )));
        }
        let asym = (&matrix - matrix.transpose())
            .iter()
            .fold(0.0f64, |a, x| a.max(x.abs()));
        if asym > tol.symplectic {
            return Err(Error::NotSymmetric(asym));
        }
        let sym = 0.5 * (&matrix + matrix.transpose());
        let min_eig = sym
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .fold(f64::INFINITY, |a, &x| a.min(x));
        if min_eig <= tol.symplectic {
            return Err(Error::NonPositiveDefinite(min_eig));
        }
        Ok(Self {
            n: dim / 2,
            ordering,
            matrix: sym,
            mean,
        })
    }

    pub fn centred(matrix: DMatrix<f64>, ordering: ModeOrdering, tol: &Tolerances) -> Result<Self> {
        let dim = matrix.nrows();
        Self::new(matrix, DVector::zeros(dim), ordering, tol)
    }

    pub fn vacuum(n: usize, ordering: ModeOrdering) -> Self {
        Self {
            n,
            ordering,
            matrix: DMatrix::identity(2 * n, 2 * n),
            mean: DVector::zeros(2 * n),
        }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    /// True iff all symplectic eigenvalues are `>= 1 - tol.symplectic`
    /// (equivalently `W + i Omega >= 0`).
    pub fn is_valid_state(&self, tol: &Tolerances) -> Result<bool> {
        let nu = williamson_eigenvalues(self, tol)?;
        Ok(nu.iter().all(|&v| v >= 1.0 - tol.symplectic))
    }

    /// Gaussian partial transpose: `W -> Sigma_J W Sigma_J`,
    /// `delta -> Sigma_J delta`.
    pub fn partial_transpose(&self, mask: &SignedModeMask, tol: &Tolerances) -> Result<Self> {
        let sigma = partial_transpose_signature(mask, self.ordering);
        Self::new(
            &sigma * &self.matrix * &sigma,
            &sigma * &self.mean,
            self.ordering,
            tol,
        )
    }
}

/// Symplectic (Williamson) eigenvalues `nu_1 >= .. >= nu_n > 0`, defined by
/// `spec(W Omega) = {+- i nu_j}`.
///
/// Computed from the Hermitian similarity `i W^{1/2} Omega W^{1/2}` rather
/// than the non-normal `W Omega`.
pub fn williamson_eigenvalues(w: &CovarianceMatrix, tol: &Tolerances) -> Result<Vec<f64>> {
    let eig = w.matrix().clone().symmetric_eigen();
    let min_eig = eig.eigenvalues.iter().fold(f64::INFINITY, |a, &x| a.min(x));
    if min_eig <= tol.symplectic {
        return Err(Error::NonPositiveDefinite(min_eig));
    }
    let dim = 2 * w.n;
    let sqrt_vals = DVector::from_iterator(dim, eig.eigenvalues.iter().map(|&v| v.sqrt()));
    let mut w_sqrt = eig.eigenvectors.clone();
    for (mut col, s) in w_sqrt.column_iter_mut().zip(sqrt_vals.iter()) {
        col *= *s;
    }
    let w_sqrt = &w_sqrt * eig.eigenvectors.transpose();
    let omega = SymplecticForm::new(w.n, w.ordering).matrix();
    let m = &w_sqrt * &omega * &w_sqrt; // real antisymmetric
    let herm = CMatrix::from_fn(dim, dim, |r, c| Complex::new(0.0, m[(r, c)]));
    let mut nu: Vec<f64> = herm
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .filter(|&v| v > 0.0)
        .collect();
    nu.sort_by(|a, b| b.partial_cmp(a).unwrap());
    if nu.len() != w.n {
        return Err(Error::CrossCheck(format!(
            "expected {} positive symplectic eigenvalues, found {}",
            w.n,
            nu.len()
        )));
    }
    Ok(nu)
}

/// Maximal eigenvalue (= operator norm) of the Gaussian operator with
/// covariance `W`: the product of `2 / (nu_j + 1)`.
pub fn gaussian_operator_max_eigenvalue(w: &CovarianceMatrix, tol: &Tolerances) -> Result<f64> {
    let nu = williamson_eigenvalues(w, tol)?;
    Ok(nu.iter().map(|&v| 2.0 / (v + 1.0)).product())
}

const PADE13_COEFFS: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// Threshold on the scaled 1-norm below which the order-13 approximant meets
/// the documented 1e-12 relative target.
const PADE13_THETA: f64 = 5.371920351148152;

fn one_norm(a: &DMatrix<f64>) -> f64 {
    (0..a.ncols())
        .map(|c| a.column(c).iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Matrix exponential by scaling-and-squaring with the order-13 rational
/// approximant. For `A = Omega Q` with symmetric `Q` the output is
/// symplectic to the working tolerance.
pub fn matrix_exponential(a: &DMatrix<f64>, tol: &Tolerances) -> Result<DMatrix<f64>> {
    let dim = a.nrows();
    if dim != a.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "exponential needs a square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    if a.iter().any(|x| !x.is_finite()) {
        return Err(Error::Domain("matrix exponential of non-finite entries".into()));
    }
    let norm = one_norm(a);
    if norm > tol.expm_norm_cap {
        return Err(Error::Overflow { norm, cap: tol.expm_norm_cap });
    }

    let squarings = if norm > PADE13_THETA {
        (norm / PADE13_THETA).log2().ceil() as u32
    } else {
        0
    };
    let a_scaled = a.map(|x| x * 2f64.powi(-(squarings as i32)));

    let id = DMatrix::<f64>::identity(dim, dim);
    let a2 = &a_scaled * &a_scaled;
    let a4 = &a2 * &a2;
    let a6 = &a2 * &a4;
    let c = &PADE13_COEFFS;
    let u_inner = &a6 * (c[13] * &a6 + c[11] * &a4 + c[9] * &a2)
        + c[7] * &a6
        + c[5] * &a4
        + c[3] * &a2
        + c[1] * &id;
    let u = &a_scaled * u_inner;
    let v = &a6 * (c[12] * &a6 + c[10] * &a4 + c[8] * &a2)
        + c[6] * &a6
        + c[4] * &a4
        + c[2] * &a2
        + c[0] * &id;

    let denom = &v - &u;
    let numer = &v + &u;
    let mut result = denom
        .lu()
        .solve(&numer)
        .ok_or_else(|| Error::Domain("singular denominator in matrix exponential".into()))?;
    for _ in 0..squarings {
        result = &result * &result;
    }
    Ok(result)
}

/// Real spectrum of a complex Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(h: &CMatrix, tol: &Tolerances) -> Result<Vec<f64>> {
    if h.nrows() != h.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "Hermitian eigenvalues need a square matrix, got {}x{}",
            h.nrows(),
            h.ncols()
        )));
    }
    let defect = (h - h.adjoint())
        .iter()
        .fold(0.0f64, |a, x| a.max(x.norm()));
    if defect > tol.hermitian {
        return Err(Error::NotHermitian(defect));
    }
    let hh = (h + h.adjoint()).map(|v| v * 0.5);
    let mut vals: Vec<f64> = hh.symmetric_eigen().eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(vals)
}

/// Singular values of a real matrix, descending.
pub fn singular_values(x: &DMatrix<f64>) -> Vec<f64> {
    let mut sv: Vec<f64> = x.clone().svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    sv
}

/// Singular values of a complex matrix, descending.
///
/// Uses the real embedding `[[Re, -Im], [Im, Re]]`, whose singular values are
/// those of `X` with doubled multiplicity.
pub fn singular_values_complex(x: &CMatrix) -> Vec<f64> {
    let (r, c) = (x.nrows(), x.ncols());
    let emb = DMatrix::from_fn(2 * r, 2 * c, |i, j| {
        let (bi, bj) = (i % r, j % c);
        match (i / r, j / c) {
            (0, 0) | (1, 1) => x[(bi, bj)].re,
            (0, 1) => -x[(bi, bj)].im,
            (1, 0) => x[(bi, bj)].im,
            _ => unreachable!(),
        }
    });
    let sv = singular_values(&emb);
    sv.into_iter().step_by(2).collect()
}

/// Trace norm: sum of singular values.
pub fn trace_norm(x: &DMatrix<f64>) -> f64 {
    singular_values(x).iter().sum()
}

/// Trace norm of a complex matrix.
pub fn trace_norm_complex(x: &CMatrix) -> f64 {
    singular_values_complex(x).iter().sum()
}

/// Operator norm: largest singular value.
pub fn operator_norm(x: &DMatrix<f64>) -> f64 {
    singular_values(x).first().copied().unwrap_or(0.0)
}
