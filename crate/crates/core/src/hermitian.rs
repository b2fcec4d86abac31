//! Dense Hermitian linear algebra with explicit tolerance semantics.

use nalgebra::{Cholesky, DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Allowed Hermitian defect, relative to `max(1, max|m_ij|)`.
pub const HERMITIAN_TOL: f64 = 1e-9;

/// Largest entry modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Largest entry modulus of `a - b`; shapes must agree.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter().zip(b.iter()).fold(0.0, |acc, (x, y)| acc.max((x - y).norm()))
}

/// `max |m - m*|` entrywise.
pub fn hermitian_defect(m: &CMatrix) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

/// Rank cutoff and positive-definiteness thresholds, both relative to
/// `max(1, lambda_max)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub rank: f64,
    pub pd: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { rank: 1e-8, pd: 1e-10 }
    }
}

/// A square matrix symmetrized as `(M + M*) / 2`, remembering the defect it had.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    data: CMatrix,
    defect: f64,
}

impl HermitianMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(invalid(format!(
                "matrix is {}x{}, expected square",
                m.nrows(),
                m.ncols()
            )));
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("matrix"));
        }
        let defect = hermitian_defect(&m);
        let data = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
        Ok(Self { data, defect })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.data
    }

    pub fn into_matrix(self) -> CMatrix {
        self.data
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    /// Absolute defect `max |M - M*|` of the input before symmetrization.
    pub fn defect(&self) -> f64 {
        self.defect
    }

    /// Whether the recorded defect is within `HERMITIAN_TOL * max(1, max|m_ij|)`.
    pub fn within_tolerance(&self) -> bool {
        self.defect <= HERMITIAN_TOL * max_abs(&self.data).max(1.0)
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> CMatrix {
        CMatrix::from_fn(rows.len(), cols.len(), |i, j| self.data[(rows[i], cols[j])])
    }
}

/// Ascending real eigenvalues with orthonormal eigenvectors in matching columns.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

pub fn eigen_h(m: &HermitianMatrix) -> Result<Eigen> {
    let n = m.dim();
    if n == 0 {
        return Ok(Eigen {
            values: Vec::new(),
            vectors: CMatrix::zeros(0, 0),
        });
    }
    let eig = SymmetricEigen::try_new(m.matrix().clone(), f64::EPSILON, 100_000).ok_or(Error::ConvergenceFailure)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(Eigen { values, vectors })
}

fn count_above(values: &[f64], tau: f64) -> usize {
    let scale = values.last().copied().unwrap_or(0.0).max(1.0);
    values.iter().filter(|&&v| v > tau * scale).count()
}

/// Count of eigenvalues above `tau * max(1, lambda_max)`.
pub fn numerical_rank(m: &HermitianMatrix, tau: f64) -> Result<usize> {
    Ok(count_above(&eigen_h(m)?.values, tau))
}

/// `D - R P^-1 R*` for the partition induced by the `head` indices.
pub fn schur_complement(m: &HermitianMatrix, head: &[usize]) -> Result<HermitianMatrix> {
    let n = m.dim();
    let mut in_head = vec![false; n];
    for &i in head {
        if i >= n || in_head[i] {
            return Err(invalid(format!("bad principal index {i}")));
        }
        in_head[i] = true;
    }
    let tail: Vec<usize> = (0..n).filter(|&i| !in_head[i]).collect();
    let d = m.submatrix(&tail, &tail);
    if head.is_empty() {
        return HermitianMatrix::new(d);
    }
    let p = m.submatrix(head, head);
    let r = m.submatrix(&tail, head);
    // eigenvalue test before the factorization
    let lambda_min = eigen_h(&HermitianMatrix::new(p.clone())?)?.values[0];
    if !(lambda_min > 0.0) {
        return Err(Error::PrincipalNotPD);
    }
    let chol = Cholesky::new(p).ok_or(Error::PrincipalNotPD)?;
    let x = chol.solve(&r.adjoint());
    HermitianMatrix::new(d - r * x)
}

/// Spectral evidence for a Hermitian matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HermitianReport {
    #[serde(with = "crate::io::matrix")]
    pub matrix: CMatrix,
    pub eigenvalues: Vec<f64>,
    pub numerical_rank: usize,
    pub psd: bool,
    pub pd: bool,
    pub hermitian_defect: f64,
    pub tolerances: Tolerances,
}

impl HermitianReport {
    /// PSD means `lambda_min >= -pd * scale`, PD means `lambda_min > pd * scale`,
    /// with `scale = max(1, lambda_max)`.
    pub fn new(m: &HermitianMatrix, tolerances: Tolerances) -> Result<Self> {
        let values = eigen_h(m)?.values;
        let scale = values.last().copied().unwrap_or(0.0).max(1.0);
        let lambda_min = values.first().copied().unwrap_or(f64::INFINITY);
        Ok(Self {
            matrix: m.matrix().clone(),
            numerical_rank: count_above(&values, tolerances.rank),
            psd: lambda_min >= -tolerances.pd * scale,
            pd: lambda_min > tolerances.pd * scale,
            eigenvalues: values,
            hermitian_defect: m.defect(),
            tolerances,
        })
    }

    pub fn lambda_min(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(f64::INFINITY)
    }

    pub fn lambda_max(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }
}
