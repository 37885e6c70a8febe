use super::dense::DenseMatrix;
use super::householder::HouseholderReflector;
use super::vector;
use crate::error::{Error, Result};

/// Householder QR of a tall matrix, reflectors kept in compact form.
#[derive(Debug, Clone)]
pub struct HouseholderQr {
    rows: usize,
    reflectors: Vec<HouseholderReflector>,
    r: DenseMatrix,
}

impl HouseholderQr {
    /// Right-looking factorization: each reflector is built from the current
    /// column and immediately applied to the whole trailing block.
    pub fn new(a: &DenseMatrix) -> Result<Self> {
        let (rows, cols) = a.shape();
        if rows < cols {
            return Err(Error::DimensionMismatch {
                expected: cols,
                actual: rows,
            });
        }
        // Column-major working copy.
        let mut work = a.columns();
        let scales: Vec<f64> = work.iter().map(|c| vector::norm(c)).collect();
        let mut reflectors = Vec::with_capacity(cols);
        for k in 0..cols {
            let (h, diag) = HouseholderReflector::annihilating(&work[k], k, scales[k]);
            work[k][k] = diag;
            work[k][k + 1..].iter_mut().for_each(|v| *v = 0.0);
            if !h.is_identity() {
                for col in work.iter_mut().skip(k + 1) {
                    h.apply(col);
                }
            }
            reflectors.push(h);
        }
        let r = DenseMatrix::from_fn(rows, cols, |i, j| if i <= j { work[j][i] } else { 0.0 });
        Ok(Self {
            rows,
            reflectors,
            r,
        })
    }

    pub fn r(&self) -> &DenseMatrix {
        &self.r
    }

    pub fn into_r(self) -> DenseMatrix {
        self.r
    }

    /// Column `j` of the orthogonal factor.
    pub fn q_column(&self, j: usize) -> Vec<f64> {
        let mut e = vector::unit(self.rows, j);
        for h in self.reflectors.iter().rev() {
            h.apply(&mut e);
        }
        e
    }

    /// The first `k` columns of `Q` as a `rows × k` matrix.
    pub fn q_thin(&self, k: usize) -> DenseMatrix {
        let cols: Vec<Vec<f64>> = (0..k.min(self.rows)).map(|j| self.q_column(j)).collect();
        DenseMatrix::from_columns(self.rows, &cols).expect("columns have matching length")
    }

    pub fn q_full(&self) -> DenseMatrix {
        self.q_thin(self.rows)
    }
}

/// Full Householder QR: `Q` is `rows × rows` orthogonal, `R` is `rows × cols`
/// upper triangular with a non-negative diagonal.
pub fn qr_factor(a: &DenseMatrix) -> Result<(DenseMatrix, DenseMatrix)> {
    let qr = HouseholderQr::new(a)?;
    let q = qr.q_full();
    Ok((q, qr.into_r()))
}
