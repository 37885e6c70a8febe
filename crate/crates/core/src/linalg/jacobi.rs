use super::dense::DenseMatrix;
use super::vector;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;
const OFF_DIAGONAL_TOL: f64 = 1e-12;
const SYMMETRY_TOL: f64 = 1e-10;

/// Eigenpairs of a real symmetric matrix, eigenvalues in descending order.
///
/// Column `j` of `eigenvectors` belongs to `eigenvalues[j]` and has its
/// largest-magnitude entry positive.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DenseMatrix,
}

impl SymmetricEigen {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvector(&self, j: usize) -> Vec<f64> {
        self.eigenvectors.column(j)
    }

    /// `V Λ Vᵀ`
    pub fn reconstruct(&self) -> DenseMatrix {
        let n = self.dim();
        let v = &self.eigenvectors;
        DenseMatrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| v.get(i, k) * self.eigenvalues[k] * v.get(j, k))
                .sum()
        })
    }

    pub(crate) fn from_unsorted(values: Vec<f64>, vectors_by_row: Vec<Vec<f64>>) -> Self {
        let n = values.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
        let mut eigenvectors = DenseMatrix::zeros(n, n);
        let mut eigenvalues = Vec::with_capacity(n);
        for (j, &k) in order.iter().enumerate() {
            let mut v = vectors_by_row[k].clone();
            vector::canonical_sign(&mut v);
            eigenvectors.set_column(j, &v);
            eigenvalues.push(values[k]);
        }
        Self {
            eigenvalues,
            eigenvectors,
        }
    }
}

pub(crate) fn check_symmetric(a: &DenseMatrix) -> Result<()> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            actual: a.cols(),
        });
    }
    let asym = a.max_asymmetry();
    if asym > SYMMETRY_TOL * a.frobenius_norm() {
        return Err(Error::NotSymmetric { asymmetry: asym });
    }
    Ok(())
}

fn off_diagonal_norm(a: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i * n + j] * a[i * n + j];
            }
        }
    }
    s.sqrt()
}

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
///
/// Sweeps over all `(p, q)` pairs in row order until the off-diagonal
/// Frobenius norm is at most `1e-12 · ‖A‖_F`, or fails with
/// [`Error::NoConvergence`] after 100 sweeps.
pub fn jacobi_eigen(a: &DenseMatrix) -> Result<SymmetricEigen> {
    check_symmetric(a)?;
    let n = a.rows();
    let scale = a.frobenius_norm();
    // Symmetrize so rotations only need one triangle to stay consistent.
    let mut m: Vec<f64> = (0..n * n)
        .map(|k| {
            let (i, j) = (k / n, k % n);
            0.5 * (a.get(i, j) + a.get(j, i))
        })
        .collect();
    // Rows of `vt` are the eigenvector estimates.
    let mut vt: Vec<Vec<f64>> = (0..n).map(|i| vector::unit(n, i)).collect();

    let target = OFF_DIAGONAL_TOL * scale;
    let mut off = off_diagonal_norm(&m, n);
    let mut sweeps = 0;
    while off > target {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                iterations: sweeps,
                residual: off,
            });
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut m, &mut vt, n, p, q);
            }
        }
        sweeps += 1;
        off = off_diagonal_norm(&m, n);
    }

    let values = (0..n).map(|i| m[i * n + i]).collect();
    Ok(SymmetricEigen::from_unsorted(values, vt))
}

/// One Jacobi rotation zeroing `m[p][q]`.
fn rotate(m: &mut [f64], vt: &mut [Vec<f64>], n: usize, p: usize, q: usize) {
    let apq = m[p * n + q];
    if apq == 0.0 {
        return;
    }
    let app = m[p * n + p];
    let aqq = m[q * n + q];
    let theta = (aqq - app) / (2.0 * apq);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = m[p * n + k];
        let akq = m[q * n + k];
        let new_p = c * akp - s * akq;
        let new_q = s * akp + c * akq;
        m[p * n + k] = new_p;
        m[k * n + p] = new_p;
        m[q * n + k] = new_q;
        m[k * n + q] = new_q;
    }
    m[p * n + p] = app - t * apq;
    m[q * n + q] = aqq + t * apq;
    m[p * n + q] = 0.0;
    m[q * n + p] = 0.0;

    let (lo, hi) = vt.split_at_mut(q);
    let vp = &mut lo[p];
    let vq = &mut hi[0];
    for (xp, xq) in vp.iter_mut().zip(vq.iter_mut()) {
        let a = *xp;
        let b = *xq;
        *xp = c * a - s * b;
        *xq = s * a + c * b;
    }
}
