use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{
    deflated_apply, truncated_energy, validate_power, validate_rounds, FitConfig, RoundRecord,
    SpcaResult,
};
use crate::data::DataSource;
use crate::error::{Error, Result};
use crate::linalg::{power_method, vector, DenseMatrix, PowerOptions};
use crate::rng;
use crate::truncation::{truncate, TruncationRule};

/// Seed of the random start used when both deterministic starts are annihilated.
const RESTART_SEED: u64 = 0x7_90E7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TPowerConfig {
    pub r: usize,
    /// Number of entries set to zero in every iterate.
    pub kappa_s: usize,
    pub tol: f64,
    pub max_iter: usize,
}

impl TPowerConfig {
    pub fn new(r: usize, kappa_s: usize) -> Self {
        let p = PowerOptions::default();
        Self {
            r,
            kappa_s,
            tol: p.tol,
            max_iter: p.max_iter,
        }
    }

    pub fn validate(&self, d: usize) -> Result<()> {
        validate_rounds(self.r, d)?;
        if self.kappa_s == 0 || self.kappa_s >= d {
            return Err(Error::InvalidConfig(format!(
                "TPower needs 0 < kappa_s < d={d}, got {}",
                self.kappa_s
            )));
        }
        validate_power(self.tol, self.max_iter)
    }
}

/// Truncated power method with projection deflation of the covariance.
pub fn tpower(source: &DataSource, cfg: &TPowerConfig) -> Result<SpcaResult> {
    tpower_observed(source, cfg, |_, _, _| {})
}

/// As [`tpower`], calling `observe(round, k, zᵀ A z)` for every sparse iterate.
pub fn tpower_observed(
    source: &DataSource,
    cfg: &TPowerConfig,
    mut observe: impl FnMut(usize, usize, f64),
) -> Result<SpcaResult> {
    let d = source.dim();
    cfg.validate(d)?;
    let rule = TruncationRule::BySparsity(cfg.kappa_s);
    let mut loadings: Vec<Vec<f64>> = Vec::with_capacity(cfg.r);
    let mut rounds = Vec::with_capacity(cfg.r);

    for t in 1..=cfg.r {
        let start = Instant::now();
        let (z, record) = tpower_round(source, &loadings, cfg, rule, |k, v| observe(t, k, v))
            .map_err(|e| e.in_round(t))?;
        loadings.push(z);
        rounds.push(RoundRecord {
            round_time: start.elapsed(),
            ..record
        });
    }
    Ok(SpcaResult {
        loadings: DenseMatrix::from_columns(d, &loadings)?,
        rounds,
        config: FitConfig::Tpower(*cfg),
    })
}

fn tpower_round(
    source: &DataSource,
    deflated: &[Vec<f64>],
    cfg: &TPowerConfig,
    rule: TruncationRule,
    mut observe: impl FnMut(usize, f64),
) -> Result<(Vec<f64>, RoundRecord)> {
    let d = source.dim();
    let apply = |x: &[f64], y: &mut [f64]| deflated_apply(source, deflated, x, y);
    let mut random = rng::gaussian_vec(&mut rng::seeded(RESTART_SEED), d);
    vector::normalize(&mut random);
    let starts = [vec![1.0 / (d as f64).sqrt(); d], vector::unit(d, 0), random];

    let mut y = vec![0.0; d];
    for start in &starts {
        apply(start, &mut y);
        if vector::norm(&y) == 0.0 {
            continue;
        }
        let mut z = truncate(&y, rule)?;
        let mut energy = truncated_energy(&y, &z);
        vector::normalize(&mut z);

        let mut iterations = 0;
        let mut converged = false;
        let objective = loop {
            apply(&z, &mut y);
            let objective = vector::dot(&z, &y);
            observe(iterations, objective);
            if iterations == cfg.max_iter || vector::norm(&y) == 0.0 {
                break objective;
            }
            let mut next = truncate(&y, rule)?;
            energy = truncated_energy(&y, &next);
            vector::normalize(&mut next);
            let step = vector::distance(&next, &z);
            z = next;
            iterations += 1;
            if step <= cfg.tol {
                converged = true;
                apply(&z, &mut y);
                let objective = vector::dot(&z, &y);
                observe(iterations, objective);
                break objective;
            }
        };
        vector::canonical_sign(&mut z);
        let record = RoundRecord {
            power_iters: iterations,
            converged,
            adjusted_variance: objective,
            truncated_energy: energy,
            round_time: Default::default(),
            projection_residual: None,
        };
        return Ok((z, record));
    }
    Err(Error::ZeroMatrix)
}

/// Classical PCA: power iteration on the covariance, deflated after each
/// component by `A ← (I − zzᵀ) A (I − zzᵀ)`.
pub fn deflation_pca(source: &DataSource, r: usize) -> Result<SpcaResult> {
    let d = source.dim();
    validate_rounds(r, d)?;
    let mut a = source.covariance_matrix();
    let mut loadings = Vec::with_capacity(r);
    let mut rounds = Vec::with_capacity(r);
    for t in 1..=r {
        let start = Instant::now();
        let power = power_method(&a, PowerOptions::default()).map_err(|e| e.in_round(t))?;
        deflate(&mut a, &power.vector);
        rounds.push(RoundRecord {
            power_iters: power.iterations,
            converged: power.converged,
            adjusted_variance: power.value,
            truncated_energy: 0.0,
            round_time: start.elapsed(),
            projection_residual: None,
        });
        loadings.push(power.vector);
    }
    Ok(SpcaResult {
        loadings: DenseMatrix::from_columns(d, &loadings)?,
        rounds,
        config: FitConfig::DeflationPca { r },
    })
}

/// `A ← A − z wᵀ − w zᵀ + (zᵀw) z zᵀ` with `w = A z`, kept exactly symmetric.
fn deflate(a: &mut DenseMatrix, z: &[f64]) {
    let w = a.mul_vec(z).expect("square");
    let rho = vector::dot(z, &w);
    let d = z.len();
    for i in 0..d {
        for j in i..d {
            let v = a.get(i, j) - z[i] * w[j] - w[i] * z[j] + rho * z[i] * z[j];
            a.set(i, j, v);
            a.set(j, i, v);
        }
    }
}
