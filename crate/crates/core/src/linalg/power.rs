use super::dense::DenseMatrix;
use super::jacobi::check_symmetric;
use super::vector;
use crate::error::{Error, Result};
use crate::rng;

/// Seed of the last-resort random start vector.
const RESTART_SEED: u64 = 0x005E_ED0F_90E7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerOptions {
    /// Stop once `‖v_{k+1} − v_k‖ ≤ tol`.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for PowerOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 5000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerResult {
    /// Unit eigenvector estimate, largest-magnitude entry positive.
    pub vector: Vec<f64>,
    /// Rayleigh quotient of `vector`.
    pub value: f64,
    pub iterations: usize,
    /// False when `max_iter` was reached first; the estimate is still returned.
    pub converged: bool,
}

/// Dominant eigenpair of a symmetric positive semidefinite matrix.
pub fn power_method(c: &DenseMatrix, opts: PowerOptions) -> Result<PowerResult> {
    check_symmetric(c)?;
    power_method_observed(c, opts, |_, _| {})
}

/// As [`power_method`], calling `observe(k, ρ_k)` with the Rayleigh quotient
/// of every iterate.
pub fn power_method_observed(
    c: &DenseMatrix,
    opts: PowerOptions,
    observe: impl FnMut(usize, f64),
) -> Result<PowerResult> {
    let n = c.rows();
    power_iterate(
        n,
        |x, y| {
            for (i, yi) in y.iter_mut().enumerate() {
                *yi = vector::dot(c.row(i), x);
            }
        },
        opts,
        observe,
    )
}

/// Power iteration on an implicit symmetric PSD operator `y ← A x`.
///
/// Starts from the normalized all-ones vector. If the operator annihilates
/// the start, falls back to `e_1` and then to a fixed-seed random vector.
/// When the all-ones start turns out to be an eigenvector already, a random
/// restart double-checks that it is the dominant one.
pub fn power_iterate(
    dim: usize,
    mut matvec: impl FnMut(&[f64], &mut [f64]),
    opts: PowerOptions,
    mut observe: impl FnMut(usize, f64),
) -> Result<PowerResult> {
    if dim == 0 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            actual: 0,
        });
    }
    let random_start = || {
        let mut r = rng::seeded(RESTART_SEED);
        let mut v = rng::gaussian_vec(&mut r, dim);
        vector::normalize(&mut v);
        v
    };
    let starts = [
        vec![1.0 / (dim as f64).sqrt(); dim],
        vector::unit(dim, 0),
        random_start(),
    ];

    for (attempt, start) in starts.iter().enumerate() {
        let Some(result) = run(start, &mut matvec, opts, &mut observe) else {
            continue;
        };
        if attempt == 0 && result.converged && result.iterations <= 1 && dim > 1 {
            if let Some(check) = run(&starts[2], &mut matvec, opts, &mut |_, _| {}) {
                let slack = 1e-12 * result.value.abs().max(1.0);
                if check.value > result.value + slack {
                    return Ok(check);
                }
            }
        }
        return Ok(result);
    }
    Err(Error::ZeroMatrix)
}

fn run(
    start: &[f64],
    matvec: &mut impl FnMut(&[f64], &mut [f64]),
    opts: PowerOptions,
    observe: &mut impl FnMut(usize, f64),
) -> Option<PowerResult> {
    let dim = start.len();
    let mut v = start.to_vec();
    let mut w = vec![0.0; dim];
    matvec(&v, &mut w);
    if vector::norm(&w) == 0.0 {
        return None;
    }

    let mut iterations = 0;
    let mut converged = false;
    loop {
        let rho = vector::dot(&v, &w);
        observe(iterations, rho);
        if iterations == opts.max_iter {
            break;
        }
        let norm = vector::norm(&w);
        if norm == 0.0 {
            // Converged onto the null space; keep the last direction.
            break;
        }
        vector::scale(1.0 / norm, &mut w);
        let step = vector::distance(&w, &v);
        std::mem::swap(&mut v, &mut w);
        iterations += 1;
        matvec(&v, &mut w);
        if step <= opts.tol {
            converged = true;
            observe(iterations, vector::dot(&v, &w));
            break;
        }
    }

    let value = vector::dot(&v, &w);
    vector::canonical_sign(&mut v);
    Some(PowerResult {
        vector: v,
        value,
        iterations,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal() {
        let r = power_method(&DenseMatrix::diagonal(&[3.0, 1.0]), PowerOptions::default()).unwrap();
        assert!((r.value - 3.0).abs() < 1e-12);
        assert!((r.vector[0] - 1.0).abs() < 1e-10 && r.vector[1].abs() < 1e-10);
        assert!(r.converged);
    }

    #[test]
    fn all_ones_eigenvector_converges_in_one_step() {
        let a = DenseMatrix::from_rows(&[[2.0, 1.0], [1.0, 2.0]]).unwrap();
        let r = power_method(&a, PowerOptions::default()).unwrap();
        assert_eq!(r.iterations, 1);
        assert!((r.value - 3.0).abs() < 1e-14);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((r.vector[0] - h).abs() < 1e-15 && (r.vector[1] - h).abs() < 1e-15);
    }

    #[test]
    fn all_ones_orthogonal_to_dominant_direction_restarts() {
        // (1,1) is an eigenvector with eigenvalue 1; the dominant one is (1,−1) with 3.
        let a = DenseMatrix::from_rows(&[[2.0, -1.0], [-1.0, 2.0]]).unwrap();
        let r = power_method(&a, PowerOptions::default()).unwrap();
        assert!((r.value - 3.0).abs() < 1e-9, "{r:?}");
    }

    #[test]
    fn falls_back_to_unit_start() {
        // Kills the all-ones vector but not e_1.
        let a = DenseMatrix::from_rows(&[[1.0, -1.0], [-1.0, 1.0]]).unwrap();
        let r = power_method(&a, PowerOptions::default()).unwrap();
        assert!((r.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn zero_matrix_errors() {
        assert_eq!(
            power_method(&DenseMatrix::zeros(3, 3), PowerOptions::default()),
            Err(Error::ZeroMatrix)
        );
    }

    #[test]
    fn flags_non_convergence() {
        let a = DenseMatrix::diagonal(&[1.0, 0.999_999]);
        let opts = PowerOptions {
            tol: 1e-14,
            max_iter: 10,
        };
        let r = power_method(&a, opts).unwrap();
        assert!(!r.converged);
        assert_eq!(r.iterations, 10);
    }
}
