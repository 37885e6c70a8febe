//! Reproduction of the synthetic, Pitprops and scaling experiments.

use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use spca_core::data::{gaussian_source, synthetic_source, SyntheticSpec};
use spca_core::{spca_sp, QualityReport, SketchConfig, SpcaConfig, TruncationRule};

use crate::error::{CliError, CliResult};
use crate::report::{write_atomic, RunReport};
use crate::run::{Algorithm, RunSpec};
use crate::source::SourceSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Experiment {
    Table1,
    Table2,
    ScalingSquare,
    ScalingWide,
}

/// Reference loadings `(z1, z2)` and CPEV for the synthetic model, per rule.
pub const TABLE1_REFERENCE: [([f64; 10], [f64; 10], f64); 3] = [
    (
        [
            0.0, 0.0, 0.0, 0.0, 0.4057, 0.4058, 0.4057, 0.4057, 0.4132, 0.4132,
        ],
        [
            0.4952, 0.4952, 0.4952, 0.4952, 0.0, 0.0, 0.0, 0.0, 0.0978, 0.0978,
        ],
        0.9943,
    ),
    (
        [
            0.0, 0.0, 0.0, 0.0, 0.4058, 0.4058, 0.4057, 0.4058, 0.4139, 0.4125,
        ],
        [0.5, 0.5, 0.5, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        0.9840,
    ),
    (
        [
            0.0, 0.0, 0.0, 0.0, 0.4058, 0.4057, 0.4058, 0.4057, 0.4125, 0.4139,
        ],
        [0.5, 0.5, 0.5, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        0.9840,
    ),
];

pub fn table1_rules() -> [TruncationRule; 3] {
    [
        TruncationRule::BySparsity(4),
        TruncationRule::ByEnergy(0.2),
        TruncationRule::HardThreshold(1.0 / 10f64.sqrt()),
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table1Column {
    pub rule: TruncationRule,
    pub z1: Vec<f64>,
    pub z2: Vec<f64>,
    pub cpev: f64,
    pub reference_z1: Vec<f64>,
    pub reference_z2: Vec<f64>,
    pub reference_cpev: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table1 {
    pub columns: Vec<Table1Column>,
    pub seconds: f64,
}

/// Two loadings of the population synthetic covariance with an exact
/// three-dimensional initial subspace.
pub fn table1() -> CliResult<Table1> {
    let start = Instant::now();
    let source = synthetic_source(SyntheticSpec { n: 0, seed: 0 }).map_err(CliError::Runtime)?;
    let mut columns = Vec::new();
    for (rule, (rz1, rz2, rcpev)) in table1_rules().into_iter().zip(TABLE1_REFERENCE) {
        let res = spca_sp(&source, &SpcaConfig::new(2, SketchConfig::exact(3), rule))
            .map_err(CliError::Runtime)?;
        let quality = QualityReport::evaluate(&source, &res.loadings, start.elapsed())
            .map_err(CliError::Runtime)?;
        columns.push(Table1Column {
            rule,
            z1: res.loading(0),
            z2: res.loading(1),
            cpev: quality.cpev,
            reference_z1: rz1.to_vec(),
            reference_z2: rz2.to_vec(),
            reference_cpev: rcpev,
        });
    }
    Ok(Table1 {
        columns,
        seconds: start.elapsed().as_secs_f64(),
    })
}

pub fn render_table1(t: &Table1) -> String {
    let mut out = String::new();
    let _ = write!(out, "{:<6}", "");
    for c in &t.columns {
        let _ = write!(out, "| {:<35}", c.rule.to_string());
    }
    let _ = writeln!(out);
    let _ = write!(out, "{:<6}", "");
    for _ in &t.columns {
        let _ = write!(out, "| {:>8} {:>8} {:>8} {:>8} ", "z1", "ref", "z2", "ref");
    }
    let _ = writeln!(out);
    for i in 0..10 {
        let _ = write!(out, "{:<6}", format!("d{}", i + 1));
        for c in &t.columns {
            let _ = write!(
                out,
                "| {:>8.4} {:>8.4} {:>8.4} {:>8.4} ",
                c.z1[i], c.reference_z1[i], c.z2[i], c.reference_z2[i]
            );
        }
        let _ = writeln!(out);
    }
    let _ = write!(out, "{:<6}", "CPEV");
    for c in &t.columns {
        let _ = write!(out, "| {:>17.4} {:>17.4} ", c.cpev, c.reference_cpev);
    }
    let _ = writeln!(out);
    out
}

/// Reference Pitprops row: NZ, loading pattern, orthogonality, CPEV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceRow {
    pub nz: usize,
    pub pattern: String,
    pub orthogonality: f64,
    pub cpev: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table2Row {
    pub label: String,
    pub report: RunReport,
    /// Fraction of successful repeats whose pattern equals the reference one.
    pub pattern_agreement: f64,
    pub reference: ReferenceRow,
}

pub const PITPROPS_SKETCH_ROWS: usize = 11;
pub const PITPROPS_SUBSPACE: usize = 5;

fn reference(nz: usize, pattern: &str, orthogonality: f64, cpev: f64) -> ReferenceRow {
    ReferenceRow {
        nz,
        pattern: pattern.into(),
        orthogonality,
        cpev,
    }
}

/// The SPCA-SP Pitprops rows plus TPower at the balanced pattern.
pub fn table2(seeds: usize) -> CliResult<Vec<Table2Row>> {
    let source = SourceSpec::Pitprops.load()?;
    let rows = [
        (
            "spca-sp sparsity:10",
            TruncationRule::BySparsity(10),
            reference(18, "3-3-3-3-3-3", 0.9576, 0.7865),
        ),
        (
            "spca-sp threshold:0.35",
            TruncationRule::HardThreshold(0.35),
            reference(17, "5-2-4-2-2-2", 0.9643, 0.8056),
        ),
        (
            "spca-sp energy:0.4",
            TruncationRule::ByEnergy(0.4),
            reference(13, "3-3-2-2-2-1", 1.0, 0.7765),
        ),
    ];
    let mut out = Vec::new();
    for (label, rule, reference) in rows {
        let mut spec = RunSpec::new(Algorithm::SpcaSp, SourceSpec::Pitprops, 6);
        spec.c = Some(PITPROPS_SKETCH_ROWS);
        spec.m = Some(PITPROPS_SUBSPACE);
        spec.rule = Some(rule);
        spec.repeats = seeds;
        let report = spec.execute_on(&source)?.report;
        out.push(row(label, report, reference));
    }
    let mut spec = RunSpec::new(Algorithm::Tpower, SourceSpec::Pitprops, 6);
    spec.rule = Some(TruncationRule::BySparsity(10));
    let report = spec.execute_on(&source)?.report;
    out.push(row(
        "tpower sparsity:10",
        report,
        reference(18, "3-3-3-3-3-3", 0.9545, 0.7819),
    ));
    Ok(out)
}

fn row(label: &str, report: RunReport, reference: ReferenceRow) -> Table2Row {
    let matching = report
        .repeats
        .iter()
        .filter(|r| r.quality.pattern_string() == reference.pattern)
        .count();
    Table2Row {
        label: label.into(),
        pattern_agreement: matching as f64 / report.repeats.len() as f64,
        report,
        reference,
    }
}

pub fn render_table2(rows: &[Table2Row]) -> String {
    let mut out = format!(
        "{:<24} {:>6} {:>14} {:>8} {:>8} {:>7} {:>8}   reference (NZ, pattern, orth, CPEV)\n",
        "run", "NZ", "pattern", "orth", "CPEV", "failed", "seconds"
    );
    for r in rows {
        let rep = &r.report;
        let best = &rep.repeats[rep.representative].quality;
        let _ = writeln!(
            out,
            "{:<24} {:>6} {:>14} {:>8.4} {:>8.4} {:>7} {:>8.4}   {}, {}, {:.4}, {:.4}",
            r.label,
            rep.median.nz,
            best.pattern_string(),
            rep.median.orthogonality.unwrap_or(f64::NAN),
            rep.median.cpev,
            rep.failures.len(),
            rep.median.fit_seconds,
            r.reference.nz,
            r.reference.pattern,
            r.reference.orthogonality,
            r.reference.cpev
        );
    }
    out
}

/// Upper limit on the subspace dimension in the square scaling sweep.
pub const SQUARE_SUBSPACE: usize = 80;
pub const SCALING_ROUNDS: usize = 20;
const SCALING_DATA_SEED: u64 = 2016;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub d: usize,
    pub n: usize,
    pub c: Option<usize>,
    pub m: usize,
    pub kappa_s: usize,
    pub spca_seconds: f64,
    pub spca_cpev: f64,
    pub spca_orthogonality: Option<f64>,
    pub spca_failures: usize,
    pub tpower_seconds: f64,
    pub tpower_cpev: f64,
    pub tpower_orthogonality: Option<f64>,
}

/// Square data (`n = d + 1`), `c = d/2`, `κ_S = ⌊0.7 d⌋`.
///
/// The subspace is `min(80, c/2)`: with-replacement sampling of `c` rows
/// yields fewer than 80 distinct rows when `d` is small.
pub fn scaling_square(
    dims: &[usize],
    seeds: usize,
    tpower_repeats: usize,
) -> CliResult<Vec<ScalingRow>> {
    dims.iter()
        .map(|&d| {
            let c = d / 2;
            let m = SQUARE_SUBSPACE.min(c / 2).max(1);
            scaling_row(d + 1, d, Some(c), m, 7 * d / 10, seeds, tpower_repeats)
        })
        .collect()
}

/// Wide data (`n = 500`), exact initialization, `m = 30`, `κ_S = ⌊0.85 d⌋`.
pub fn scaling_wide(dims: &[usize], repeats: usize) -> CliResult<Vec<ScalingRow>> {
    dims.iter()
        .map(|&d| scaling_row(500, d, None, 30, 85 * d / 100, repeats, repeats))
        .collect()
}

fn scaling_row(
    n: usize,
    d: usize,
    c: Option<usize>,
    m: usize,
    kappa_s: usize,
    seeds: usize,
    tpower_repeats: usize,
) -> CliResult<ScalingRow> {
    let source_spec = SourceSpec::Random {
        n,
        d,
        seed: SCALING_DATA_SEED,
    };
    let source = gaussian_source(n, d, SCALING_DATA_SEED).map_err(CliError::Invalid)?;
    let rule = TruncationRule::BySparsity(kappa_s);

    let mut spec = RunSpec::new(Algorithm::SpcaSp, source_spec.clone(), SCALING_ROUNDS);
    spec.c = c;
    spec.exact = c.is_none();
    spec.m = Some(m);
    spec.rule = Some(rule);
    spec.repeats = seeds;
    let sp = spec.execute_on(&source)?.report;

    let mut spec = RunSpec::new(Algorithm::Tpower, source_spec, SCALING_ROUNDS);
    spec.rule = Some(rule);
    spec.repeats = tpower_repeats;
    let tp = spec.execute_on(&source)?.report;

    Ok(ScalingRow {
        d,
        n,
        c,
        m,
        kappa_s,
        spca_seconds: sp.median.fit_seconds,
        spca_cpev: sp.median.cpev,
        spca_orthogonality: sp.median.orthogonality,
        spca_failures: sp.failures.len(),
        tpower_seconds: tp.median.fit_seconds,
        tpower_cpev: tp.median.cpev,
        tpower_orthogonality: tp.median.orthogonality,
    })
}

pub fn scaling_csv(rows: &[ScalingRow]) -> CliResult<Vec<u8>> {
    let err = |e: String| CliError::Format {
        path: "scaling.csv".into(),
        message: e,
    };
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| err(e.to_string()))?;
    }
    w.into_inner().map_err(|e| err(e.to_string()))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let bytes = serde_json::to_vec_pretty(value).map_err(|e| CliError::Format {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    write_atomic(path, &bytes)
}
