//! Truncation operators that sparsify a loading vector, and the measures
//! used to reason about them.
//!
//! Three rules are supported:
//! - [`TruncationRule::BySparsity`] zeroes a fixed number of the smallest
//!   entries (by magnitude);
//! - [`TruncationRule::ByEnergy`] zeroes the largest set of smallest entries
//!   whose squared mass stays within a fraction of `‖z‖²`;
//! - [`TruncationRule::HardThreshold`] zeroes every entry strictly below a
//!   magnitude threshold.
//!
//! Ties in magnitude are broken by index: the smaller index is zeroed first.
//! Truncation never renormalizes.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::vector;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum TruncationRule {
    /// Zero exactly this many entries. `0` disables truncation.
    BySparsity(usize),
    /// Zero the smallest entries carrying at most this fraction of the energy.
    ByEnergy(f64),
    /// Zero entries with magnitude strictly below this threshold.
    HardThreshold(f64),
}

impl TruncationRule {
    /// Checks the rule parameters against the vector length `dim`.
    pub fn validate(&self, dim: usize) -> Result<()> {
        match *self {
            TruncationRule::BySparsity(k) if k >= dim && k > 0 => Err(Error::InvalidRule(format!(
                "sparsity {k} must be below the dimension {dim}"
            ))),
            TruncationRule::ByEnergy(e) if !(e > 0.0 && e < 1.0) => Err(Error::InvalidRule(
                format!("energy fraction {e} must lie in (0, 1)"),
            )),
            TruncationRule::HardThreshold(h) if !(h > 0.0 && h.is_finite()) => Err(
                Error::InvalidRule(format!("threshold {h} must be positive")),
            ),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for TruncationRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TruncationRule::BySparsity(k) => write!(f, "sparsity:{k}"),
            TruncationRule::ByEnergy(e) => write!(f, "energy:{e}"),
            TruncationRule::HardThreshold(h) => write!(f, "threshold:{h}"),
        }
    }
}

/// Parses `sparsity:K`, `energy:E` or `threshold:H` (short forms `s:`, `e:`, `h:`).
impl FromStr for TruncationRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, value) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidRule(format!("expected KIND:VALUE, got {s:?}")))?;
        let bad = |_| Error::InvalidRule(format!("bad value in {s:?}"));
        let rule = match kind.trim().to_ascii_lowercase().as_str() {
            "sparsity" | "s" => TruncationRule::BySparsity(
                value
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidRule(format!("bad value in {s:?}")))?,
            ),
            "energy" | "e" => TruncationRule::ByEnergy(value.trim().parse().map_err(bad)?),
            "threshold" | "hard" | "h" => {
                TruncationRule::HardThreshold(value.trim().parse().map_err(bad)?)
            }
            other => return Err(Error::InvalidRule(format!("unknown rule {other:?}"))),
        };
        // Length-independent checks; the sparsity bound needs the dimension.
        match rule {
            TruncationRule::BySparsity(_) => Ok(rule),
            _ => rule.validate(usize::MAX).map(|_| rule),
        }
    }
}

/// Indices sorted by ascending magnitude, ties by ascending index.
fn ascending_order(z: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..z.len()).collect();
    idx.sort_by(|&a, &b| z[a].abs().total_cmp(&z[b].abs()).then(a.cmp(&b)));
    idx
}

/// Applies `rule` to `z`, returning a copy with the selected entries zeroed.
pub fn truncate(z: &[f64], rule: TruncationRule) -> Result<Vec<f64>> {
    rule.validate(z.len())?;
    if z.iter().all(|&v| v == 0.0) {
        return Err(Error::ZeroVector);
    }
    let mut out = z.to_vec();
    match rule {
        TruncationRule::BySparsity(k) => {
            for &i in ascending_order(z).iter().take(k) {
                out[i] = 0.0;
            }
        }
        TruncationRule::ByEnergy(fraction) => {
            let budget = fraction * vector::dot(z, z);
            let order = ascending_order(z);
            let mut spent = 0.0;
            // The largest entry always survives.
            for &i in &order[..order.len() - 1] {
                let e = z[i] * z[i];
                if spent + e > budget {
                    break;
                }
                spent += e;
                out[i] = 0.0;
            }
        }
        TruncationRule::HardThreshold(threshold) => {
            for v in out.iter_mut() {
                if v.abs() < threshold {
                    *v = 0.0;
                }
            }
            if out.iter().all(|&v| v == 0.0) {
                return Err(Error::AllEntriesTruncated { threshold });
            }
        }
    }
    Ok(out)
}

/// `1 − ‖z‖₀ / d`, counting exact zeros only.
pub fn sparsity(z: &[f64]) -> f64 {
    if z.is_empty() {
        return 1.0;
    }
    let nonzero = z.iter().filter(|&&v| v != 0.0).count();
    1.0 - nonzero as f64 / z.len() as f64
}

/// `1 − |aᵀb| / (‖a‖‖b‖)`: 1 for orthogonal vectors, 0 for parallel ones.
pub fn orthogonality_measure(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    let (na, nb) = (vector::norm(a), vector::norm(b));
    if na == 0.0 || nb == 0.0 {
        return Err(Error::ZeroVector);
    }
    let cos = (vector::dot(a, b).abs() / (na * nb)).min(1.0);
    Ok(1.0 - cos)
}

/// Guaranteed lower bound on `⟨a, T(b)⟩` for unit orthogonal `a`, `b`, given
/// the truncated vector `b⁺ = T(b)`.
///
/// The generic bound `1 − √(1 − ‖b⁺‖²)` holds for every rule; the
/// rule-specific bounds are returned by [`rule_orthogonality_bound`].
pub fn generic_orthogonality_bound(truncated: &[f64]) -> f64 {
    let kept = vector::dot(truncated, truncated);
    1.0 - (1.0 - kept).max(0.0).sqrt()
}

/// Rule-specific lower bound on `⟨a, T(b)⟩` for unit orthogonal `a`, `b` in
/// dimension `dim`.
pub fn rule_orthogonality_bound(rule: TruncationRule, truncated: &[f64]) -> f64 {
    let dim = truncated.len() as f64;
    match rule {
        TruncationRule::BySparsity(k) => 1.0 - (k as f64 / dim).sqrt(),
        TruncationRule::ByEnergy(e) => 1.0 - e.sqrt(),
        TruncationRule::HardThreshold(h) => {
            let nnz = truncated.iter().filter(|&&v| v != 0.0).count() as f64;
            1.0 - (1.0 - nnz * h * h).max(0.0).sqrt()
        }
    }
}

/// Interval that `sparsity(T(z))` must fall in, for a unit `z` of length `dim`.
///
/// Energy truncation: `[⌊κ_E d⌋/d, 1 − 1/d]`. Hard thresholding: at least
/// `1 − 1/(d κ_H²)` when `κ_H ≥ 1/√d`, at most `1 − 1/d` otherwise. Sparsity
/// truncation: at least `κ_S/d`.
pub fn sparsity_bounds(rule: TruncationRule, dim: usize) -> (f64, f64) {
    let d = dim as f64;
    match rule {
        TruncationRule::BySparsity(k) => (k as f64 / d, 1.0 - 1.0 / d),
        TruncationRule::ByEnergy(e) => ((e * d).floor() / d, 1.0 - 1.0 / d),
        TruncationRule::HardThreshold(h) => {
            if h >= 1.0 / d.sqrt() {
                (1.0 - 1.0 / (d * h * h), 1.0)
            } else {
                (0.0, 1.0 - 1.0 / d)
            }
        }
    }
}
