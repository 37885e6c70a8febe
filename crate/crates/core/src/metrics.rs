//! Quality measures for a set of loadings.

use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::data::DataSource;
use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, HouseholderQr};

/// Columns whose `|R_jj|` falls at or below this are treated as dependent.
pub const DEPENDENT_COLUMN_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QualityReport {
    pub cpev: f64,
    /// `None` for a single loading.
    pub orthogonality: Option<f64>,
    pub nz: usize,
    pub sp: f64,
    pub pattern: Vec<usize>,
    #[serde(with = "crate::duration_secs")]
    pub elapsed: Duration,
}

impl QualityReport {
    pub fn evaluate(
        source: &DataSource,
        loadings: &DenseMatrix,
        elapsed: Duration,
    ) -> Result<Self> {
        let (nz, sp, pattern) = loading_pattern(loadings);
        let orthogonality = match total_orthogonality(loadings) {
            Ok(v) => Some(v),
            Err(Error::UndefinedForSingleLoading) => None,
            Err(e) => return Err(e),
        };
        Ok(Self {
            cpev: cpev(source, loadings)?,
            orthogonality,
            nz,
            sp,
            pattern,
            elapsed,
        })
    }

    /// Pattern rendered as `3-3-3`.
    pub fn pattern_string(&self) -> String {
        self.pattern
            .iter()
            .map(usize::to_string)
            .collect::<Vec<_>>()
            .join("-")
    }
}

/// An orthonormal basis of `span(Z)`, dependent columns dropped.
pub fn orthonormal_span(z: &DenseMatrix) -> Result<DenseMatrix> {
    let d = z.rows();
    if z.cols() == 0 {
        return Ok(DenseMatrix::zeros(d, 0));
    }
    // More columns than rows can only add dependent directions.
    let z = if z.cols() > d {
        z.leading_columns(d)
    } else {
        z.clone()
    };
    let qr = HouseholderQr::new(&z)?;
    let kept: Vec<Vec<f64>> = (0..z.cols())
        .filter(|&j| qr.r().get(j, j).abs() > DEPENDENT_COLUMN_TOL)
        .map(|j| qr.q_column(j))
        .collect();
    DenseMatrix::from_columns(d, &kept)
}

/// Share of `Tr(XᵀX)` captured by an orthonormal basis of `span(Z)`.
pub fn cpev(source: &DataSource, z: &DenseMatrix) -> Result<f64> {
    if z.rows() != source.dim() {
        return Err(Error::DimensionMismatch {
            expected: source.dim(),
            actual: z.rows(),
        });
    }
    let w = orthonormal_span(z)?;
    if w.cols() == 0 {
        return Ok(0.0);
    }
    let xw = source.factor().matmul(&w)?;
    Ok(xw.frobenius_norm_sq() / source.total_variance())
}

/// `1 − (Σ|ZᵀZ| − Tr(ZᵀZ)) / (r(r − 1))`
pub fn total_orthogonality(z: &DenseMatrix) -> Result<f64> {
    let r = z.cols();
    if r < 2 {
        return Err(Error::UndefinedForSingleLoading);
    }
    let g = z.gram();
    let mut off = 0.0;
    for i in 0..r {
        for j in 0..r {
            if i != j {
                off += g.get(i, j).abs();
            }
        }
    }
    Ok(1.0 - off / (r * (r - 1)) as f64)
}

/// Exact nonzero counts per column, their total, and `1 − nz/(r·d)`.
pub fn loading_pattern(z: &DenseMatrix) -> (usize, f64, Vec<usize>) {
    let pattern: Vec<usize> = (0..z.cols())
        .map(|j| (0..z.rows()).filter(|&i| z.get(i, j) != 0.0).count())
        .collect();
    let nz: usize = pattern.iter().sum();
    let cells = z.rows() * z.cols();
    let sp = if cells == 0 {
        1.0
    } else {
        1.0 - nz as f64 / cells as f64
    };
    (nz, sp, pattern)
}
