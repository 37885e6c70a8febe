//! The deflation engine and two baselines.

mod baselines;
mod engine;

pub use baselines::{deflation_pca, tpower, tpower_observed, TPowerConfig};
pub use engine::{spca_sp, SpcaEngine};

use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::data::DataSource;
use crate::error::{Error, Result};
use crate::linalg::{vector, DenseMatrix, PowerOptions};
use crate::sketch::SketchConfig;
use crate::truncation::TruncationRule;

/// How the next projection is computed after each loading.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QrMode {
    /// Reuse the reflectors of earlier loadings and factor only the new block.
    #[default]
    Stacked,
    /// Refactor the whole compound matrix every round.
    Naive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpcaConfig {
    pub r: usize,
    pub sketch: SketchConfig,
    pub rule: TruncationRule,
    pub power_tol: f64,
    pub power_max_iter: usize,
    pub qr_mode: QrMode,
}

impl SpcaConfig {
    pub fn new(r: usize, sketch: SketchConfig, rule: TruncationRule) -> Self {
        let power = PowerOptions::default();
        Self {
            r,
            sketch,
            rule,
            power_tol: power.tol,
            power_max_iter: power.max_iter,
            qr_mode: QrMode::Stacked,
        }
    }

    pub fn with_qr_mode(mut self, qr_mode: QrMode) -> Self {
        self.qr_mode = qr_mode;
        self
    }

    pub fn power_options(&self) -> PowerOptions {
        PowerOptions {
            tol: self.power_tol,
            max_iter: self.power_max_iter,
        }
    }

    pub fn validate(&self, n: usize, d: usize) -> Result<()> {
        validate_rounds(self.r, d)?;
        self.sketch.validate(n, d)?;
        self.rule.validate(d)?;
        validate_power(self.power_tol, self.power_max_iter)
    }
}

pub(crate) fn validate_rounds(r: usize, d: usize) -> Result<()> {
    if r == 0 || r > d {
        return Err(Error::InvalidConfig(format!(
            "number of loadings r={r} must satisfy 1 <= r <= d={d}"
        )));
    }
    Ok(())
}

pub(crate) fn validate_power(tol: f64, max_iter: usize) -> Result<()> {
    if !(tol > 0.0 && tol.is_finite()) || max_iter == 0 {
        return Err(Error::InvalidConfig(format!(
            "power iteration needs tol > 0 and max_iter >= 1 (got {tol}, {max_iter})"
        )));
    }
    Ok(())
}

/// Diagnostics of one deflation round.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub power_iters: usize,
    /// False when the iteration limit was hit.
    pub converged: bool,
    /// `z̃ᵀ A_{t−1} z̃` with `A_{t−1}` the covariance deflated by all earlier loadings.
    pub adjusted_variance: f64,
    /// Share of squared norm removed by truncation.
    pub truncated_energy: f64,
    #[serde(with = "crate::duration_secs")]
    pub round_time: Duration,
    /// `max_i ‖P_tᵀ z̃_i‖_∞` for the projection built after this round, if any.
    pub projection_residual: Option<f64>,
}

/// Settings a result was produced with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "algorithm")]
pub enum FitConfig {
    SpcaSp(SpcaConfig),
    Tpower(TPowerConfig),
    DeflationPca { r: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpcaResult {
    /// `d × r`, unit columns, largest-magnitude entry of each positive.
    pub loadings: DenseMatrix,
    pub rounds: Vec<RoundRecord>,
    pub config: FitConfig,
}

impl SpcaResult {
    pub fn loading(&self, t: usize) -> Vec<f64> {
        self.loadings.column(t)
    }

    pub fn total_time(&self) -> Duration {
        self.rounds.iter().map(|r| r.round_time).sum()
    }
}

/// `x ← Π_1 ⋯ Π_k x` or `x ← Π_k ⋯ Π_1 x` with `Π_i = I − z_i z_iᵀ`.
fn project_out(loadings: &[Vec<f64>], x: &mut [f64], reverse: bool) {
    let mut step = |z: &Vec<f64>| {
        let s = vector::dot(z, x);
        if s != 0.0 {
            vector::axpy(-s, z, x);
        }
    };
    if reverse {
        loadings.iter().rev().for_each(&mut step);
    } else {
        loadings.iter().for_each(&mut step);
    }
}

/// `y ← A_k x` where `A_k = Π_k ⋯ Π_1 XᵀX Π_1 ⋯ Π_k`, evaluated through the factor.
fn deflated_apply(source: &DataSource, loadings: &[Vec<f64>], x: &[f64], y: &mut [f64]) {
    let mut v = x.to_vec();
    project_out(loadings, &mut v, true);
    let f = source.factor();
    let fv = f.mul_vec(&v).expect("dimension checked by caller");
    let mut w = f.tr_mul_vec(&fv).expect("dimension checked by caller");
    project_out(loadings, &mut w, false);
    y.copy_from_slice(&w);
}

/// `zᵀ A_k z = ‖X Π_1 ⋯ Π_k z‖²`
fn deflated_quadratic(source: &DataSource, loadings: &[Vec<f64>], z: &[f64]) -> f64 {
    let mut v = z.to_vec();
    project_out(loadings, &mut v, true);
    let fv = source
        .factor()
        .mul_vec(&v)
        .expect("dimension checked by caller");
    vector::dot(&fv, &fv)
}

fn truncated_energy(before: &[f64], after: &[f64]) -> f64 {
    let total = vector::dot(before, before);
    if total == 0.0 {
        return 0.0;
    }
    (1.0 - vector::dot(after, after) / total).max(0.0)
}
