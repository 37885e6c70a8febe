//! Householder reflectors and an incrementally grown QR factorization.
//!
//! A [`ReflectorStack`] holds `H_1, …, H_K` with `Qᵀ = H_K ⋯ H_1`. Pushing a
//! column applies the existing reflectors to it and appends one new reflector
//! that zeroes everything below the next diagonal position, which is exactly
//! one step of a left-looking Householder QR. The diagonal of `R` is kept
//! non-negative so factorizations built column by column compare entrywise
//! with [`qr_factor`](super::qr_factor).

use serde::{Deserialize, Serialize};

use super::vector;
use crate::error::{Error, Result};

/// Relative size below which a transformed column counts as numerically zero.
pub const ZERO_COLUMN_TOL: f64 = 1e-14;

/// `H = I − 2 v vᵀ` with `‖v‖ = 1`, or the identity when `v = 0`.
///
/// `v` is stored at full length; entries before `offset` are zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HouseholderReflector {
    v: Vec<f64>,
    offset: usize,
}

impl HouseholderReflector {
    pub fn identity(dim: usize, offset: usize) -> Self {
        Self {
            v: vec![0.0; dim],
            offset,
        }
    }

    /// Builds the reflector mapping `x[offset..]` onto `+‖x[offset..]‖ e_offset`.
    ///
    /// Returns the reflector and the resulting diagonal entry. A tail whose
    /// norm is at most `ZERO_COLUMN_TOL · scale` yields the identity and a
    /// zero diagonal.
    pub fn annihilating(x: &[f64], offset: usize, scale: f64) -> (Self, f64) {
        let dim = x.len();
        let head = x[offset];
        let tail_sq: f64 = x[offset + 1..].iter().map(|v| v * v).sum();
        let mu = (head * head + tail_sq).sqrt();

        if mu <= ZERO_COLUMN_TOL * scale {
            return (Self::identity(dim, offset), 0.0);
        }
        if tail_sq == 0.0 {
            if head >= 0.0 {
                return (Self::identity(dim, offset), head);
            }
            let mut v = vec![0.0; dim];
            v[offset] = 1.0;
            return (Self { v, offset }, -head);
        }

        let mut v = vec![0.0; dim];
        v[offset + 1..].copy_from_slice(&x[offset + 1..]);
        // head − μ, rewritten to avoid cancellation when head > 0.
        v[offset] = if head <= 0.0 {
            head - mu
        } else {
            -tail_sq / (head + mu)
        };
        vector::normalize(&mut v[offset..]);
        (Self { v, offset }, mu)
    }

    pub fn dim(&self) -> usize {
        self.v.len()
    }

    pub fn offset(&self) -> usize {
        self.offset
    }

    pub fn direction(&self) -> &[f64] {
        &self.v
    }

    pub fn is_identity(&self) -> bool {
        self.v[self.offset..].iter().all(|&c| c == 0.0)
    }

    /// `x ← H x`
    #[inline]
    pub fn apply(&self, x: &mut [f64]) {
        debug_assert_eq!(x.len(), self.v.len());
        let v = &self.v[self.offset..];
        let tail = &mut x[self.offset..];
        let s = vector::dot(v, tail);
        if s != 0.0 {
            vector::axpy(-2.0 * s, v, tail);
        }
    }
}

/// Ordered Householder reflectors `H_1, …, H_K`; reflector `k` has offset `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReflectorStack {
    dim: usize,
    reflectors: Vec<HouseholderReflector>,
}

impl ReflectorStack {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            reflectors: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.reflectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reflectors.is_empty()
    }

    pub fn reflectors(&self) -> &[HouseholderReflector] {
        &self.reflectors
    }

    /// Drops every reflector after the first `len`.
    pub fn truncate(&mut self, len: usize) {
        self.reflectors.truncate(len);
    }

    fn check_dim(&self, len: usize) -> Result<()> {
        if len != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: len,
            });
        }
        Ok(())
    }

    /// Appends the next column of the factorization.
    ///
    /// The existing reflectors are applied to `col`, then a new reflector at
    /// offset `k = self.len()` zeroes the entries below `k`. Returns the
    /// column of `R`: entries `0..=k` are meaningful, the rest are zero.
    pub fn push_column(&mut self, col: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(col.len())?;
        let k = self.reflectors.len();
        if k >= self.dim {
            return Err(Error::StackFull { dim: self.dim });
        }
        let scale = vector::norm(col);
        let mut r = col.to_vec();
        self.apply_qt_in_place(&mut r);
        let (h, diag) = HouseholderReflector::annihilating(&r, k, scale);
        r[k] = diag;
        r[k + 1..].iter_mut().for_each(|v| *v = 0.0);
        self.reflectors.push(h);
        Ok(r)
    }

    /// `x ← Qᵀ x` (reflectors applied in push order).
    pub fn apply_qt_in_place(&self, x: &mut [f64]) {
        for h in &self.reflectors {
            h.apply(x);
        }
    }

    /// `x ← Q x` (reflectors applied in reverse order).
    pub fn apply_q_in_place(&self, x: &mut [f64]) {
        for h in self.reflectors.iter().rev() {
            h.apply(x);
        }
    }

    /// Returns `Qᵀ x` when `adjoint` is set, `Q x` otherwise.
    pub fn apply_q(&self, x: &[f64], adjoint: bool) -> Result<Vec<f64>> {
        self.check_dim(x.len())?;
        let mut y = x.to_vec();
        if adjoint {
            self.apply_qt_in_place(&mut y);
        } else {
            self.apply_q_in_place(&mut y);
        }
        Ok(y)
    }

    /// Column `j` of `Q`.
    pub fn q_column(&self, j: usize) -> Vec<f64> {
        let mut e = vector::unit(self.dim, j);
        // Reflectors with offset > j leave e_j untouched.
        let upto = self.reflectors.len().min(j + 1);
        for h in self.reflectors[..upto].iter().rev() {
            h.apply(&mut e);
        }
        e
    }
}
