//! Data sources and the datasets used by the experiments.

mod csv_source;
mod generators;
mod pitprops;

pub use csv_source::{load_csv, read_matrix_csv};
pub use generators::{gaussian_source, synthetic_covariance, synthetic_source, SyntheticSpec};
pub use pitprops::{pitprops_correlation, pitprops_source, PITPROPS_VARIABLES};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{jacobi_eigen, DenseMatrix};

/// Relative centering tolerance for raw data columns.
const CENTERING_TOL: f64 = 1e-10;
/// Relative reconstruction tolerance for the covariance square-root factor.
const FACTOR_TOL: f64 = 1e-8;

/// Input to every fitting routine.
///
/// `Raw` holds an `n × d` data matrix with centered columns, so the
/// covariance is `XᵀX`. `Covariance` holds a `d × d` PSD matrix `A` together
/// with a square-root factor `F = Λ^{1/2} Vᵀ` (from `A = V Λ Vᵀ`) that
/// satisfies `FᵀF = A` and stands in for the data matrix wherever one is
/// needed (row sketching, `X P` products, explained variance).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum DataSource {
    Raw {
        data: DenseMatrix,
    },
    Covariance {
        covariance: DenseMatrix,
        factor: DenseMatrix,
    },
}

impl DataSource {
    /// Centers the columns of `data` and wraps it.
    pub fn raw(mut data: DenseMatrix) -> Result<Self> {
        if data.rows() == 0 || data.cols() == 0 {
            return Err(Error::InvalidConfig("data matrix is empty".into()));
        }
        data.center_columns();
        Ok(DataSource::Raw { data })
    }

    /// Wraps `data` without touching it; fails unless every column is centered.
    pub fn raw_centered(data: DenseMatrix) -> Result<Self> {
        let means = data.column_means();
        for (j, m) in means.iter().enumerate() {
            let scale = data.column(j).iter().fold(1.0_f64, |s, v| s.max(v.abs()));
            if m.abs() > CENTERING_TOL * scale {
                return Err(Error::InvalidConfig(format!(
                    "column {j} is not centered (mean {m:e})"
                )));
            }
        }
        Ok(DataSource::Raw { data })
    }

    /// Wraps a symmetric PSD covariance (or correlation) matrix.
    pub fn covariance(covariance: DenseMatrix) -> Result<Self> {
        let eig = jacobi_eigen(&covariance)?;
        let d = covariance.rows();
        let lambda_max = eig.eigenvalues.first().copied().unwrap_or(0.0).max(0.0);
        let mut factor = DenseMatrix::zeros(d, d);
        for (i, &lambda) in eig.eigenvalues.iter().enumerate() {
            // Tiny negative eigenvalues are roundoff; larger ones fail the check below.
            if lambda < -FACTOR_TOL * lambda_max.max(f64::MIN_POSITIVE) {
                return Err(Error::NotPsd { residual: lambda });
            }
            let s = lambda.max(0.0).sqrt();
            for j in 0..d {
                factor.set(i, j, s * eig.eigenvectors.get(j, i));
            }
        }
        let residual = factor.gram().sub(&covariance)?.frobenius_norm();
        if residual > FACTOR_TOL * covariance.frobenius_norm() {
            return Err(Error::NotPsd { residual });
        }
        Ok(DataSource::Covariance { covariance, factor })
    }

    /// Number of variables `d`.
    pub fn dim(&self) -> usize {
        self.factor().cols()
    }

    /// Rows of the (pseudo-)data matrix.
    pub fn samples(&self) -> usize {
        self.factor().rows()
    }

    /// The data matrix, or the square-root factor in covariance mode.
    pub fn factor(&self) -> &DenseMatrix {
        match self {
            DataSource::Raw { data } => data,
            DataSource::Covariance { factor, .. } => factor,
        }
    }

    pub fn is_covariance(&self) -> bool {
        matches!(self, DataSource::Covariance { .. })
    }

    /// `Tr(XᵀX)`
    pub fn total_variance(&self) -> f64 {
        match self {
            DataSource::Raw { data } => data.frobenius_norm_sq(),
            DataSource::Covariance { covariance, .. } => covariance.trace(),
        }
    }

    /// The dense `d × d` covariance `XᵀX`.
    pub fn covariance_matrix(&self) -> DenseMatrix {
        match self {
            DataSource::Raw { data } => data.gram(),
            DataSource::Covariance { covariance, .. } => covariance.clone(),
        }
    }

    /// `XᵀX x` evaluated through the factor.
    pub fn apply_covariance(&self, x: &[f64]) -> Result<Vec<f64>> {
        let f = self.factor();
        f.tr_mul_vec(&f.mul_vec(x)?)
    }
}
