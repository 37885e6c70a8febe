//! Sparse principal component analysis by deflation over subspace
//! projections.
//!
//! Each loading is found by a power iteration restricted to a small
//! orthonormal basis `P`, truncated to make it sparse, and then folded into
//! a Householder factorization that produces the next basis orthogonal to
//! every loading found so far. The initial basis comes from a randomized row
//! sketch of the data (or an exact SVD).
//!
//! Modules:
//! - [`linalg`]: dense kernels (QR, Jacobi, power iteration).
//! - [`sketch`]: the initial projection.
//! - [`truncation`]: sparsifying operators and their bounds.
//! - [`spca`]: the deflation engine and the TPower / deflation-PCA baselines.
//! - [`metrics`]: explained variance, orthogonality, sparsity pattern.
//! - [`data`]: data sources, generators and loaders.

pub mod data;
mod duration_secs;
pub mod error;
pub mod linalg;
pub mod metrics;
pub mod rng;
pub mod sketch;
pub mod spca;
pub mod truncation;

pub use data::DataSource;
pub use error::{Error, Result};
pub use linalg::DenseMatrix;
pub use metrics::QualityReport;
pub use sketch::{Projection, SketchConfig, SketchMode};
pub use spca::{deflation_pca, spca_sp, tpower, QrMode, SpcaConfig, SpcaResult};
pub use truncation::TruncationRule;
