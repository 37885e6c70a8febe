//! Versioned JSON report and loadings files.
//!
//! A run directory holds `report.json` (a [`RunReport`]) and `loadings.csv`:
//! a header `z1,…,zr`, then one row per variable with every loading of the
//! representative repeat in shortest round-trip decimal form.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use spca_core::data::read_matrix_csv;
use spca_core::spca::{FitConfig, RoundRecord};
use spca_core::{DataSource, DenseMatrix, QualityReport};

use crate::error::{CliError, CliResult};
use crate::run::RunSpec;

/// Bumped on any incompatible change to [`RunReport`].
pub const REPORT_SCHEMA_VERSION: u32 = 1;
pub const REPORT_FILE: &str = "report.json";
pub const LOADINGS_FILE: &str = "loadings.csv";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub spec: RunSpec,
    pub samples: usize,
    pub dim: usize,
    pub repeats: Vec<RepeatReport>,
    /// Repeats that stopped with an error; excluded from the medians.
    pub failures: Vec<RepeatFailure>,
    pub median: MedianSummary,
    /// Index into `repeats` of the run whose loadings were written: the one
    /// with CPEV closest to the median.
    pub representative: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepeatReport {
    pub seed: u64,
    pub config: FitConfig,
    pub quality: QualityReport,
    pub rounds: Vec<RoundRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepeatFailure {
    pub seed: u64,
    pub error: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MedianSummary {
    pub cpev: f64,
    pub cpev_min: f64,
    pub cpev_max: f64,
    pub orthogonality: Option<f64>,
    pub nz: f64,
    pub fit_seconds: f64,
}

/// Median of a non-empty sample; the mean of the middle pair for even sizes.
pub fn median(values: &[f64]) -> f64 {
    assert!(!values.is_empty(), "median of an empty sample");
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let k = v.len() / 2;
    if v.len() % 2 == 1 {
        v[k]
    } else {
        0.5 * (v[k - 1] + v[k])
    }
}

impl MedianSummary {
    pub fn of(qualities: &[&QualityReport]) -> Self {
        let cpev: Vec<f64> = qualities.iter().map(|q| q.cpev).collect();
        let orth: Vec<f64> = qualities.iter().filter_map(|q| q.orthogonality).collect();
        let nz: Vec<f64> = qualities.iter().map(|q| q.nz as f64).collect();
        let secs: Vec<f64> = qualities.iter().map(|q| q.elapsed.as_secs_f64()).collect();
        Self {
            cpev: median(&cpev),
            cpev_min: cpev.iter().copied().fold(f64::INFINITY, f64::min),
            cpev_max: cpev.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            orthogonality: (!orth.is_empty()).then(|| median(&orth)),
            nz: median(&nz),
            fit_seconds: median(&secs),
        }
    }
}

impl RunReport {
    pub fn new(
        spec: RunSpec,
        source: &DataSource,
        repeats: Vec<RepeatReport>,
        failures: Vec<RepeatFailure>,
    ) -> Self {
        let median = MedianSummary::of(&repeats.iter().map(|r| &r.quality).collect::<Vec<_>>());
        let representative = repeats
            .iter()
            .enumerate()
            .min_by(|a, b| {
                let da = (a.1.quality.cpev - median.cpev).abs();
                let db = (b.1.quality.cpev - median.cpev).abs();
                da.total_cmp(&db)
            })
            .map_or(0, |(i, _)| i);
        Self {
            schema_version: REPORT_SCHEMA_VERSION,
            spec,
            samples: source.samples(),
            dim: source.dim(),
            repeats,
            failures,
            median,
            representative,
        }
    }
}

/// Writes `bytes` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| CliError::io(path, e))?;
    tmp.as_file()
        .sync_all()
        .map_err(|e| CliError::io(path, e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

pub fn loadings_csv(loadings: &DenseMatrix) -> CliResult<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let header: Vec<String> = (1..=loadings.cols()).map(|j| format!("z{j}")).collect();
    let format_err = |e: csv::Error| CliError::Format {
        path: PathBuf::from(LOADINGS_FILE),
        message: e.to_string(),
    };
    w.write_record(&header).map_err(format_err)?;
    for i in 0..loadings.rows() {
        let row: Vec<String> = (0..loadings.cols())
            .map(|j| loadings.get(i, j).to_string())
            .collect();
        w.write_record(&row).map_err(format_err)?;
    }
    w.into_inner().map_err(|e| CliError::Format {
        path: PathBuf::from(LOADINGS_FILE),
        message: e.to_string(),
    })
}

/// Writes `report.json` and `loadings.csv` into `dir`, creating it if needed.
pub fn write_run(dir: &Path, report: &RunReport, loadings: &DenseMatrix) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let json = serde_json::to_vec_pretty(report).map_err(|e| CliError::Format {
        path: dir.join(REPORT_FILE),
        message: e.to_string(),
    })?;
    write_atomic(&dir.join(LOADINGS_FILE), &loadings_csv(loadings)?)?;
    write_atomic(&dir.join(REPORT_FILE), &json)
}

pub fn read_report(path: &Path) -> CliResult<RunReport> {
    let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
    let report: RunReport = serde_json::from_slice(&bytes).map_err(|e| CliError::Format {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    if report.schema_version != REPORT_SCHEMA_VERSION {
        return Err(CliError::Format {
            path: path.to_path_buf(),
            message: format!(
                "report schema {} is not supported (expected {REPORT_SCHEMA_VERSION})",
                report.schema_version
            ),
        });
    }
    Ok(report)
}

pub fn read_loadings(path: &Path) -> CliResult<DenseMatrix> {
    read_matrix_csv(path, true).map_err(CliError::Invalid)
}

/// Recomputes the representative repeat's metrics from the files in `dir`
/// and returns the largest deviation from the stored values.
pub fn verify_run(dir: &Path) -> CliResult<f64> {
    let report = read_report(&dir.join(REPORT_FILE))?;
    let loadings = read_loadings(&dir.join(LOADINGS_FILE))?;
    let source = report.spec.source.load()?;
    let stored = &report.repeats[report.representative].quality;
    let fresh =
        QualityReport::evaluate(&source, &loadings, stored.elapsed).map_err(CliError::Runtime)?;
    let mut gap = (fresh.cpev - stored.cpev).abs();
    match (fresh.orthogonality, stored.orthogonality) {
        (Some(a), Some(b)) => gap = gap.max((a - b).abs()),
        (None, None) => {}
        _ => gap = f64::INFINITY,
    }
    if fresh.nz != stored.nz || fresh.pattern != stored.pattern {
        gap = f64::INFINITY;
    }
    Ok(gap)
}
