use std::time::Instant;

use super::QrMode;
use super::{deflated_quadratic, truncated_energy, FitConfig, RoundRecord, SpcaConfig, SpcaResult};
use crate::data::DataSource;
use crate::error::{Error, Result};
use crate::linalg::{power_method, vector, DenseMatrix, HouseholderQr, ReflectorStack};
use crate::sketch::initial_projection;
use crate::truncation::truncate;

/// Round-by-round driver of the deflation algorithm.
///
/// The stack holds one reflector per accepted loading. Each round pushes the
/// new loading and then the columns of the current projection on top of it;
/// the trailing columns of the resulting orthogonal factor become the next
/// projection, after which the reflectors of the projection block are
/// dropped again.
#[derive(Debug, Clone)]
pub struct SpcaEngine<'a> {
    source: &'a DataSource,
    cfg: SpcaConfig,
    stack: ReflectorStack,
    projection: DenseMatrix,
    loadings: Vec<Vec<f64>>,
    rounds: Vec<RoundRecord>,
}

impl<'a> SpcaEngine<'a> {
    pub fn new(source: &'a DataSource, cfg: SpcaConfig) -> Result<Self> {
        cfg.validate(source.samples(), source.dim())?;
        let projection = initial_projection(source, &cfg.sketch)?.basis;
        Ok(Self {
            source,
            cfg,
            stack: ReflectorStack::new(source.dim()),
            projection,
            loadings: Vec::with_capacity(cfg.r),
            rounds: Vec::with_capacity(cfg.r),
        })
    }

    /// The projection the next round will search in.
    pub fn projection(&self) -> &DenseMatrix {
        &self.projection
    }

    pub fn loadings(&self) -> &[Vec<f64>] {
        &self.loadings
    }

    pub fn rounds(&self) -> &[RoundRecord] {
        &self.rounds
    }

    pub fn is_finished(&self) -> bool {
        self.loadings.len() == self.cfg.r
    }

    /// `max_i ‖Pᵀ z̃_i‖_∞` over the loadings found so far.
    pub fn projection_residual(&self) -> f64 {
        self.loadings
            .iter()
            .map(|z| vector::max_abs(&self.projection.tr_mul_vec(z).expect("same dimension")))
            .fold(0.0, f64::max)
    }

    /// Runs one round. The projection is not updated after the last one.
    pub fn step(&mut self) -> Result<()> {
        if self.is_finished() {
            return Ok(());
        }
        let t = self.loadings.len() + 1;
        self.round(t).map_err(|e| e.in_round(t))
    }

    fn round(&mut self, t: usize) -> Result<()> {
        let start = Instant::now();
        // C = Pᵀ XᵀX P, formed as GᵀG.
        let g = self.source.factor().matmul(&self.projection)?;
        let c = g.gram();
        let power = power_method(&c, self.cfg.power_options())?;

        let dense = self.projection.mul_vec(&power.vector)?;
        let mut z = truncate(&dense, self.cfg.rule)?;
        let energy = truncated_energy(&dense, &z);
        vector::normalize(&mut z);
        vector::canonical_sign(&mut z);
        let adjusted_variance = deflated_quadratic(self.source, &self.loadings, &z);
        self.loadings.push(z);

        let mut projection_residual = None;
        if t < self.cfg.r {
            self.projection = match self.cfg.qr_mode {
                QrMode::Stacked => self.update_stacked(t)?,
                QrMode::Naive => self.update_naive(t)?,
            };
            projection_residual = Some(self.projection_residual());
        }

        self.rounds.push(RoundRecord {
            power_iters: power.iterations,
            converged: power.converged,
            adjusted_variance,
            truncated_energy: energy,
            round_time: start.elapsed(),
            projection_residual,
        });
        Ok(())
    }

    /// Number of projection columns after round `t`.
    fn next_width(&self, t: usize, factored: usize) -> Result<usize> {
        let end = (t + self.cfg.sketch.m).min(factored);
        if end <= t {
            return Err(Error::RankCollapse { round: t });
        }
        Ok(end - t)
    }

    fn update_stacked(&mut self, t: usize) -> Result<DenseMatrix> {
        let d = self.stack.dim();
        self.stack.push_column(&self.loadings[t - 1])?;
        for p in self.projection.columns() {
            if self.stack.len() == d {
                break;
            }
            self.stack.push_column(&p)?;
        }
        let width = self.next_width(t, self.stack.len());
        let columns: Vec<Vec<f64>> = match width {
            Ok(w) => (t..t + w).map(|j| self.stack.q_column(j)).collect(),
            Err(_) => Vec::new(),
        };
        self.stack.truncate(t);
        width?;
        DenseMatrix::from_columns(d, &columns)
    }

    fn update_naive(&mut self, t: usize) -> Result<DenseMatrix> {
        let d = self.source.dim();
        let mut b: Vec<Vec<f64>> = self.loadings.clone();
        b.extend(self.projection.columns());
        b.truncate(d);
        let qr = HouseholderQr::new(&DenseMatrix::from_columns(d, &b)?)?;
        let width = self.next_width(t, b.len())?;
        let columns: Vec<Vec<f64>> = (t..t + width).map(|j| qr.q_column(j)).collect();
        DenseMatrix::from_columns(d, &columns)
    }

    pub fn finish(self) -> SpcaResult {
        let d = self.source.dim();
        SpcaResult {
            loadings: DenseMatrix::from_columns(d, &self.loadings)
                .expect("unit loadings of length d"),
            rounds: self.rounds,
            config: FitConfig::SpcaSp(self.cfg),
        }
    }
}

/// Finds `cfg.r` sparse loadings by deflating over subspace projections.
pub fn spca_sp(source: &DataSource, cfg: &SpcaConfig) -> Result<SpcaResult> {
    let mut engine = SpcaEngine::new(source, *cfg)?;
    while !engine.is_finished() {
        engine.step()?;
    }
    Ok(engine.finish())
}
