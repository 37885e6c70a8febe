use std::time::{Duration, Instant};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use spca_core::rng::derive_seed;
use spca_core::spca::{FitConfig, TPowerConfig};
use spca_core::{
    deflation_pca, spca_sp, tpower, DataSource, QrMode, QualityReport, SketchConfig, SpcaConfig,
    SpcaResult, TruncationRule,
};

use crate::error::{CliError, CliResult};
use crate::report::{RepeatFailure, RepeatReport, RunReport};
use crate::source::SourceSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    SpcaSp,
    Tpower,
    DeflationPca,
}

/// Everything needed to reproduce one `run` invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSpec {
    pub algorithm: Algorithm,
    pub source: SourceSpec,
    pub r: usize,
    pub m: Option<usize>,
    pub c: Option<usize>,
    pub rule: Option<TruncationRule>,
    pub seed: u64,
    pub repeats: usize,
    /// Exact SVD initialization instead of a row sketch.
    pub exact: bool,
    pub qr_mode: QrMode,
}

impl RunSpec {
    pub fn new(algorithm: Algorithm, source: SourceSpec, r: usize) -> Self {
        Self {
            algorithm,
            source,
            r,
            m: None,
            c: None,
            rule: None,
            seed: 0,
            repeats: 1,
            exact: false,
            qr_mode: QrMode::Stacked,
        }
    }

    /// One validated configuration per repeat, paired with its seed.
    pub fn fit_configs(&self, n: usize, d: usize) -> CliResult<Vec<(u64, FitConfig)>> {
        let usage = |m: String| Err(CliError::Usage(m));
        if self.repeats == 0 {
            return usage("--repeats must be at least 1".into());
        }
        let seeds = (0..self.repeats as u64).map(|i| derive_seed(self.seed, i));
        let configs: Vec<(u64, FitConfig)> = match self.algorithm {
            Algorithm::SpcaSp => {
                let Some(rule) = self.rule else {
                    return usage(
                        "spca-sp needs --rule (sparsity:K, energy:E or threshold:H)".into(),
                    );
                };
                let Some(m) = self.m else {
                    return usage("spca-sp needs --m (subspace dimension)".into());
                };
                if self.exact && self.c.is_some() {
                    return usage("--c has no effect with --exact; drop one of them".into());
                }
                if !self.exact && self.c.is_none() {
                    return usage("spca-sp needs --c (sketch rows) or --exact".into());
                }
                seeds
                    .map(|seed| {
                        let sketch = match self.c {
                            Some(c) => SketchConfig::randomized(c, m, seed),
                            None => SketchConfig::exact(m),
                        };
                        let cfg = SpcaConfig::new(self.r, sketch, rule).with_qr_mode(self.qr_mode);
                        (seed, FitConfig::SpcaSp(cfg))
                    })
                    .collect()
            }
            Algorithm::Tpower => {
                self.reject_sketch_flags("tpower")?;
                let kappa = match self.rule {
                    Some(TruncationRule::BySparsity(k)) => k,
                    _ => return usage("tpower needs --rule sparsity:K".into()),
                };
                seeds
                    .map(|seed| (seed, FitConfig::Tpower(TPowerConfig::new(self.r, kappa))))
                    .collect()
            }
            Algorithm::DeflationPca => {
                self.reject_sketch_flags("deflation-pca")?;
                if self.rule.is_some() {
                    return usage("deflation-pca does not truncate; drop --rule".into());
                }
                seeds
                    .map(|seed| (seed, FitConfig::DeflationPca { r: self.r }))
                    .collect()
            }
        };
        for (_, cfg) in &configs {
            validate(cfg, n, d).map_err(CliError::Invalid)?;
        }
        Ok(configs)
    }

    fn reject_sketch_flags(&self, alg: &str) -> CliResult<()> {
        if self.m.is_some() || self.c.is_some() || self.exact || self.qr_mode != QrMode::Stacked {
            return Err(CliError::Usage(format!(
                "{alg} takes no sketch options (--m, --c, --exact, --naive-qr)"
            )));
        }
        Ok(())
    }

    /// Loads the source, fits every repeat after one discarded warm-up fit,
    /// and assembles the report.
    pub fn execute(&self) -> CliResult<RunOutcome> {
        let source = self.source.load()?;
        self.execute_on(&source)
    }

    pub fn execute_on(&self, source: &DataSource) -> CliResult<RunOutcome> {
        let configs = self.fit_configs(source.samples(), source.dim())?;
        let _ = fit(source, &configs[0].1);

        let mut repeats = Vec::new();
        let mut failures = Vec::new();
        let mut loadings = Vec::new();
        let mut last_error = None;
        for (seed, cfg) in configs {
            match timed_fit(source, &cfg) {
                Ok((res, elapsed)) => {
                    let quality = QualityReport::evaluate(source, &res.loadings, elapsed)
                        .map_err(CliError::Runtime)?;
                    repeats.push(RepeatReport {
                        seed,
                        config: cfg,
                        quality,
                        rounds: res.rounds,
                    });
                    loadings.push(res.loadings);
                }
                Err(e) => {
                    failures.push(RepeatFailure {
                        seed,
                        error: e.name().to_string(),
                        message: e.to_string(),
                    });
                    last_error = Some(e);
                }
            }
        }
        if repeats.is_empty() {
            return Err(CliError::Runtime(last_error.expect("at least one repeat")));
        }
        let report = RunReport::new(self.clone(), source, repeats, failures);
        let loadings = loadings.swap_remove(report.representative);
        Ok(RunOutcome { report, loadings })
    }
}

pub struct RunOutcome {
    pub report: RunReport,
    /// Loadings of the representative repeat.
    pub loadings: spca_core::DenseMatrix,
}

pub fn validate(cfg: &FitConfig, n: usize, d: usize) -> spca_core::Result<()> {
    match cfg {
        FitConfig::SpcaSp(c) => c.validate(n, d),
        FitConfig::Tpower(c) => c.validate(d),
        FitConfig::DeflationPca { r } => {
            if *r == 0 || *r > d {
                return Err(spca_core::Error::InvalidConfig(format!(
                    "r={r} must satisfy 1 <= r <= d={d}"
                )));
            }
            Ok(())
        }
    }
}

pub fn fit(source: &DataSource, cfg: &FitConfig) -> spca_core::Result<SpcaResult> {
    match cfg {
        FitConfig::SpcaSp(c) => spca_sp(source, c),
        FitConfig::Tpower(c) => tpower(source, c),
        FitConfig::DeflationPca { r } => deflation_pca(source, *r),
    }
}

/// Wall-clock time of the fit call alone.
pub fn timed_fit(
    source: &DataSource,
    cfg: &FitConfig,
) -> spca_core::Result<(SpcaResult, Duration)> {
    let start = Instant::now();
    let res = fit(source, cfg)?;
    Ok((res, start.elapsed()))
}
