use serde::{Deserialize, Serialize};

use super::DataSource;
use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::rng;

const VAR_H1: f64 = 290.0;
const VAR_H2: f64 = 300.0;
const H3_FROM_H1: f64 = -0.3;
const H3_FROM_H2: f64 = 0.925;

/// Three-factor synthetic model with ten observables: variables 1–4 load on
/// `h1 ~ N(0, 290)`, 5–8 on `h2 ~ N(0, 300)`, 9–10 on
/// `h3 = −0.3 h1 + 0.925 h2 + ε`; each observable adds unit-variance noise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    /// Sample count; `0` selects the exact population covariance.
    pub n: usize,
    pub seed: u64,
}

fn block(i: usize) -> usize {
    match i {
        0..=3 => 0,
        4..=7 => 1,
        _ => 2,
    }
}

/// The exact 10 × 10 population covariance of the synthetic model.
pub fn synthetic_covariance() -> DenseMatrix {
    let var_h3 = H3_FROM_H1 * H3_FROM_H1 * VAR_H1 + H3_FROM_H2 * H3_FROM_H2 * VAR_H2 + 1.0;
    let factor_cov = |a: usize, b: usize| match (a.min(b), a.max(b)) {
        (0, 0) => VAR_H1,
        (1, 1) => VAR_H2,
        (2, 2) => var_h3,
        (0, 1) => 0.0,
        (0, 2) => H3_FROM_H1 * VAR_H1,
        (1, 2) => H3_FROM_H2 * VAR_H2,
        _ => unreachable!(),
    };
    DenseMatrix::from_fn(10, 10, |i, j| {
        factor_cov(block(i), block(j)) + if i == j { 1.0 } else { 0.0 }
    })
}

/// Samples the synthetic model (centered raw data), or returns the population
/// covariance in covariance mode when `spec.n == 0`.
pub fn synthetic_source(spec: SyntheticSpec) -> Result<DataSource> {
    if spec.n == 0 {
        return DataSource::covariance(synthetic_covariance());
    }
    let mut r = rng::seeded(spec.seed);
    let mut data = Vec::with_capacity(spec.n * 10);
    for _ in 0..spec.n {
        let h1 = VAR_H1.sqrt() * rng::standard_normal(&mut r);
        let h2 = VAR_H2.sqrt() * rng::standard_normal(&mut r);
        let h3 = H3_FROM_H1 * h1 + H3_FROM_H2 * h2 + rng::standard_normal(&mut r);
        let factors = [h1, h2, h3];
        for i in 0..10 {
            data.push(factors[block(i)] + rng::standard_normal(&mut r));
        }
    }
    DataSource::raw(DenseMatrix::from_vec(spec.n, 10, data)?)
}

/// Seeded standard-normal `n × d` data with centered columns.
pub fn gaussian_source(n: usize, d: usize, seed: u64) -> Result<DataSource> {
    if n == 0 || d == 0 {
        return Err(Error::InvalidConfig(format!(
            "random data needs n, d >= 1 (got {n} x {d})"
        )));
    }
    let mut r = rng::seeded(seed);
    let data = rng::gaussian_vec(&mut r, n * d);
    DataSource::raw(DenseMatrix::from_vec(n, d, data)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn population_entries() {
        let a = synthetic_covariance();
        assert_eq!(a.get(0, 1), 290.0);
        assert_eq!(a.get(4, 5), 300.0);
        assert_eq!(a.get(0, 4), 0.0);
        assert_eq!(a.get(0, 0), 291.0);
        assert_eq!(a.get(0, 8), -87.0);
        assert_eq!(a.get(4, 9), 277.5);
        assert!((a.get(8, 9) - 283.7875).abs() < 1e-12);
        assert!((a.get(9, 9) - 284.7875).abs() < 1e-12);
        assert_eq!(a.max_asymmetry(), 0.0);
    }

    #[test]
    fn gaussian_is_centered_and_reproducible() {
        let a = gaussian_source(50, 7, 3).unwrap();
        let b = gaussian_source(50, 7, 3).unwrap();
        assert_eq!(a.factor(), b.factor());
        assert!(a.factor().column_means().iter().all(|m| m.abs() <= 1e-10));
        assert_ne!(a.factor(), gaussian_source(50, 7, 4).unwrap().factor());
    }

    #[test]
    fn population_mode_is_covariance() {
        let s = synthetic_source(SyntheticSpec { n: 0, seed: 0 }).unwrap();
        assert!(s.is_covariance());
        assert_eq!(s.dim(), 10);
    }
}
