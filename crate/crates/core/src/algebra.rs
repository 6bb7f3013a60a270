//! Dense complex linear algebra used throughout the crate.
//!
//! Matrices and vectors are plain `nalgebra` dynamic types over `Complex64`.
//! The Hermitian eigensolver merges numerically degenerate eigenvalues into a
//! single spectral projection so that downstream code can reason about a
//! finite, discrete spectrum.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use thiserror::Error;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Default relative gap below which eigenvalues are treated as equal.
pub const DEFAULT_DEGENERACY_TOL: f64 = 1e-8;

/// Relative Hermiticity tolerance accepted by [`eig_hermitian`].
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Vectors with a residual norm below this are dropped by [`gram_schmidt`].
pub const GRAM_SCHMIDT_DROP: f64 = 1e-12;

const MAX_EIGEN_SWEEPS: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian (max |A - A^H| = {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("matrix contains a non-finite entry")]
    NonFinite,
    #[error("eigensolver did not converge")]
    ConvergenceFailure,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// Spectral decomposition of a Hermitian matrix with degenerate eigenvalues merged.
#[derive(Debug, Clone)]
pub struct SpectralData {
    /// Distinct eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    /// Orthogonal projection onto each eigenspace.
    pub projections: Vec<CMatrix>,
    pub multiplicities: Vec<usize>,
    /// Orthonormal basis of each eigenspace.
    pub eigenspaces: Vec<Vec<CVector>>,
    /// Absolute gap threshold that was used for merging.
    pub merge_threshold: f64,
}

impl SpectralData {
    pub fn dim(&self) -> usize {
        self.multiplicities.iter().sum()
    }

    /// `sum_j u_j P_j`
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.dim();
        let mut out = CMatrix::zeros(n, n);
        for (u, p) in self.eigenvalues.iter().zip(&self.projections) {
            out += p * Complex64::new(*u, 0.0);
        }
        out
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.multiplicities.iter().all(|&m| m == 1)
    }
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn basis_vector(n: usize, i: usize) -> CVector {
    let mut v = CVector::zeros(n);
    v[i] = c(1.0, 0.0);
    v
}

pub fn real_diag(values: &[f64]) -> CMatrix {
    CMatrix::from_diagonal(&CVector::from_iterator(
        values.len(),
        values.iter().map(|&x| c(x, 0.0)),
    ))
}

/// Build a matrix from row-major real entries.
pub fn real_matrix(rows: usize, cols: usize, entries: &[f64]) -> CMatrix {
    CMatrix::from_row_iterator(rows, cols, entries.iter().map(|&x| c(x, 0.0)))
}

/// `|v><v|`
pub fn outer(v: &CVector) -> CMatrix {
    v * v.adjoint()
}

pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

pub fn is_finite(a: &CMatrix) -> bool {
    a.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

fn ensure_square(a: &CMatrix) -> Result<usize, AlgebraError> {
    if a.nrows() != a.ncols() {
        return Err(AlgebraError::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    Ok(a.nrows())
}

/// Largest entry of `A - A^H`.
pub fn hermitian_deviation(a: &CMatrix) -> f64 {
    max_abs(&(a - a.adjoint()))
}

pub fn is_hermitian(a: &CMatrix, tol: f64) -> bool {
    a.nrows() == a.ncols() && hermitian_deviation(a) <= tol
}

fn check_hermitian(a: &CMatrix) -> Result<usize, AlgebraError> {
    let n = ensure_square(a)?;
    if !is_finite(a) {
        return Err(AlgebraError::NonFinite);
    }
    let deviation = hermitian_deviation(a);
    if deviation > HERMITIAN_TOL * max_abs(a).max(1.0) {
        return Err(AlgebraError::NotHermitian { deviation });
    }
    Ok(n)
}

/// `||U^H U - I||_F <= tol`
pub fn is_unitary(u: &CMatrix, tol: f64) -> bool {
    if u.nrows() != u.ncols() {
        return false;
    }
    unitarity_defect(u) <= tol
}

pub fn unitarity_defect(u: &CMatrix) -> f64 {
    (u.adjoint() * u - identity(u.nrows())).norm()
}

pub fn frobenius_dist(a: &CMatrix, b: &CMatrix) -> Result<f64, AlgebraError> {
    if a.shape() != b.shape() {
        return Err(AlgebraError::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    Ok((a - b).norm())
}

/// Eigenpairs of a Hermitian matrix sorted by ascending eigenvalue, without
/// any merging.
pub fn eigh(a: &CMatrix) -> Result<(Vec<f64>, Vec<CVector>), AlgebraError> {
    let n = check_hermitian(a)?;
    let sym = (a + a.adjoint()) * c(0.5, 0.0);
    let eig = sym
        .try_symmetric_eigen(f64::EPSILON, MAX_EIGEN_SWEEPS)
        .ok_or(AlgebraError::ConvergenceFailure)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = order
        .iter()
        .map(|&i| eig.eigenvectors.column(i).into_owned())
        .collect();
    Ok((values, vectors))
}

/// Hermitian eigendecomposition with greedy clustering of eigenvalues whose
/// consecutive gap is at most `degeneracy_tol * max(1, ||A||_F)`.
pub fn eig_hermitian(a: &CMatrix, degeneracy_tol: f64) -> Result<SpectralData, AlgebraError> {
    let (values, vectors) = eigh(a)?;
    let threshold = degeneracy_tol * a.norm().max(1.0);

    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for i in 0..values.len() {
        match clusters.last_mut() {
            Some(last) if values[i] - values[*last.last().unwrap()] <= threshold => last.push(i),
            _ => clusters.push(vec![i]),
        }
    }

    let n = values.len();
    let mut out = SpectralData {
        eigenvalues: Vec::with_capacity(clusters.len()),
        projections: Vec::with_capacity(clusters.len()),
        multiplicities: Vec::with_capacity(clusters.len()),
        eigenspaces: Vec::with_capacity(clusters.len()),
        merge_threshold: threshold,
    };
    for cluster in clusters {
        let mean = cluster.iter().map(|&i| values[i]).sum::<f64>() / cluster.len() as f64;
        let mut proj = CMatrix::zeros(n, n);
        for &i in &cluster {
            proj += outer(&vectors[i]);
        }
        out.eigenvalues.push(mean);
        out.projections.push(proj);
        out.multiplicities.push(cluster.len());
        out.eigenspaces
            .push(cluster.iter().map(|&i| vectors[i].clone()).collect());
    }
    Ok(out)
}

/// `exp(-i t H)` for Hermitian `H`, through its eigendecomposition.
pub fn expm_antihermitian(h: &CMatrix, t: f64) -> Result<CMatrix, AlgebraError> {
    let (values, vectors) = eigh(h)?;
    let n = values.len();
    let mut out = CMatrix::zeros(n, n);
    for (lambda, v) in values.iter().zip(&vectors) {
        let phase = Complex64::from_polar(1.0, -t * lambda);
        out += outer(v) * phase;
    }
    Ok(out)
}

/// Modified Gram-Schmidt with one re-orthogonalization pass.
pub fn gram_schmidt(vectors: &[CVector]) -> Result<Vec<CVector>, AlgebraError> {
    let Some(first) = vectors.first() else {
        return Ok(Vec::new());
    };
    let dim = first.len();
    let mut basis: Vec<CVector> = Vec::new();
    for v in vectors {
        if v.len() != dim {
            return Err(AlgebraError::DimensionMismatch {
                expected: dim,
                found: v.len(),
            });
        }
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let proj = b.dotc(&w);
                w -= b * proj;
            }
        }
        let norm = w.norm();
        if norm >= GRAM_SCHMIDT_DROP {
            basis.push(w / c(norm, 0.0));
        }
    }
    Ok(basis)
}

/// Largest entry of `G - I` where `G` is the Gram matrix of `vectors`.
pub fn orthonormality_defect(vectors: &[CVector]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, a) in vectors.iter().enumerate() {
        for (j, b) in vectors.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((a.dotc(b) - c(target, 0.0)).norm());
        }
    }
    worst
}
