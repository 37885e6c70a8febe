//! Shared fixtures for the benchmarks.

use spca_core::linalg::DenseMatrix;
use spca_core::rng;

/// Seeded standard-normal `rows × cols` matrix.
pub fn gaussian(rows: usize, cols: usize, seed: u64) -> DenseMatrix {
    let mut r = rng::seeded(seed);
    DenseMatrix::from_vec(rows, cols, rng::gaussian_vec(&mut r, rows * cols)).expect("sizes match")
}

/// Seeded `n × n` Gram matrix of `2n × n` Gaussian data.
pub fn gram(n: usize, seed: u64) -> DenseMatrix {
    gaussian(2 * n, n, seed).gram()
}
