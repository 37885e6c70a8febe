//! Construction of the initial subspace projection `P_0`.
//!
//! In randomized mode `c` rows of `X` are drawn with replacement, each with
//! probability proportional to its squared norm, and rescaled so that the
//! sketch's Gram matrix is an unbiased estimate of `XᵀX`. The top `m` right
//! singular directions of the sketch form `P_0`. Exact mode uses the data
//! matrix itself.

use serde::{Deserialize, Serialize};

use crate::data::DataSource;
use crate::error::{Error, Result};
use crate::linalg::{self, vector, DenseMatrix, HouseholderQr, SymmetricEigen};
use crate::rng;

/// Eigenvalues below this fraction of the largest one count as zero.
pub const RANK_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SketchMode {
    Randomized,
    ExactSvd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SketchConfig {
    /// Number of sampled rows.
    pub c: usize,
    /// Subspace dimension.
    pub m: usize,
    pub seed: u64,
    pub mode: SketchMode,
}

impl SketchConfig {
    pub fn randomized(c: usize, m: usize, seed: u64) -> Self {
        Self {
            c,
            m,
            seed,
            mode: SketchMode::Randomized,
        }
    }

    /// Exact initialization; `c` is unused and set to `m`.
    pub fn exact(m: usize) -> Self {
        Self {
            c: m,
            m,
            seed: 0,
            mode: SketchMode::ExactSvd,
        }
    }

    /// Checks `1 ≤ m ≤ c ≤ min(n, d)` (randomized) or `1 ≤ m ≤ min(n, d)` (exact).
    pub fn validate(&self, n: usize, d: usize) -> Result<()> {
        let limit = n.min(d);
        let ok = match self.mode {
            SketchMode::Randomized => self.m >= 1 && self.m <= self.c && self.c <= limit,
            SketchMode::ExactSvd => self.m >= 1 && self.m <= limit,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidConfig(format!(
                "sketch c={} m={} ({:?}) invalid for {n} x {d} data: need 1 <= m <= c <= min(n, d)",
                self.c, self.m, self.mode
            )))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProjectionOrigin {
    Sketch(SketchConfig),
    /// Produced by the deflation update after this many loadings.
    Round(usize),
}

/// A `d × m` matrix with orthonormal columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Projection {
    pub basis: DenseMatrix,
    pub origin: ProjectionOrigin,
}

impl Projection {
    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn width(&self) -> usize {
        self.basis.cols()
    }

    /// `‖PᵀP − I‖_max`
    pub fn orthonormality_error(&self) -> f64 {
        let g = self.basis.gram();
        let mut worst = 0.0_f64;
        for i in 0..g.rows() {
            for j in 0..g.cols() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g.get(i, j) - target).abs());
            }
        }
        worst
    }
}

/// `ξ_i = ‖x_(i)‖² / ‖X‖_F²`
pub fn row_probabilities(x: &DenseMatrix) -> Result<Vec<f64>> {
    let norms: Vec<f64> = (0..x.rows())
        .map(|i| vector::dot(x.row(i), x.row(i)))
        .collect();
    let total: f64 = norms.iter().sum();
    if total == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    Ok(norms.into_iter().map(|v| v / total).collect())
}

/// Draws the `c × d` row sketch `X_c`; row `t` is `x_(i_t) / √(c ξ_{i_t})`.
pub fn sample_sketch(x: &DenseMatrix, cfg: &SketchConfig) -> Result<DenseMatrix> {
    cfg.validate(x.rows(), x.cols())?;
    let xi = row_probabilities(x)?;
    let cumulative: Vec<f64> = xi
        .iter()
        .scan(0.0, |acc, p| {
            *acc += p;
            Some(*acc)
        })
        .collect();
    let total = *cumulative.last().expect("at least one row");
    let mut r = rng::seeded(cfg.seed);
    let c = cfg.c;
    let mut out = DenseMatrix::zeros(c, x.cols());
    for t in 0..c {
        let target = rng::uniform(&mut r) * total;
        let i = cumulative
            .partition_point(|&cum| cum <= target)
            .min(x.rows() - 1);
        let s = 1.0 / (c as f64 * xi[i]).sqrt();
        for (dst, src) in out.row_mut(t).iter_mut().zip(x.row(i)) {
            *dst = s * src;
        }
    }
    Ok(out)
}

/// Right singular directions of `a`, strongest first, computed from the
/// smaller of the two Gram matrices. Directions whose squared singular value
/// falls below `RANK_TOL · σ_1²` are dropped.
fn right_singular_directions(a: &DenseMatrix, limit: usize) -> Result<Vec<Vec<f64>>> {
    let directions = if a.rows() <= a.cols() {
        let eig = symmetric_eigen(&a.outer_gram())?;
        numerical_rank_prefix(&eig, limit)
            .map(|(j, sigma_sq)| {
                let mut p = a.tr_mul_vec(&eig.eigenvector(j)).expect("shape");
                vector::scale(1.0 / sigma_sq.sqrt(), &mut p);
                p
            })
            .collect()
    } else {
        let eig = symmetric_eigen(&a.gram())?;
        numerical_rank_prefix(&eig, limit)
            .map(|(j, _)| eig.eigenvector(j))
            .collect()
    };
    Ok(directions)
}

fn numerical_rank_prefix(
    eig: &SymmetricEigen,
    limit: usize,
) -> impl Iterator<Item = (usize, f64)> + '_ {
    let top = eig.eigenvalues.first().copied().unwrap_or(0.0);
    eig.eigenvalues
        .iter()
        .copied()
        .enumerate()
        .take(limit)
        .take_while(move |&(_, v)| top > 0.0 && v > RANK_TOL * top)
}

/// Symmetric eigensolver used for the sketch Gram matrices.
fn symmetric_eigen(a: &DenseMatrix) -> Result<SymmetricEigen> {
    linalg::jacobi_eigen(a)
}

fn orthonormalize(dim: usize, columns: &[Vec<f64>]) -> Result<DenseMatrix> {
    let p = DenseMatrix::from_columns(dim, columns)?;
    Ok(HouseholderQr::new(&p)?.q_thin(columns.len()))
}

fn candidate_directions(
    source: &DataSource,
    cfg: &SketchConfig,
    limit: usize,
) -> Result<Vec<Vec<f64>>> {
    let x = source.factor();
    match cfg.mode {
        SketchMode::Randomized => right_singular_directions(&sample_sketch(x, cfg)?, limit),
        SketchMode::ExactSvd => right_singular_directions(x, limit),
    }
}

/// Builds `P_0` from the source according to `cfg`.
pub fn initial_projection(source: &DataSource, cfg: &SketchConfig) -> Result<Projection> {
    cfg.validate(source.samples(), source.dim())?;
    let directions = candidate_directions(source, cfg, cfg.m)?;
    if directions.len() < cfg.m {
        return Err(Error::RankDeficient {
            requested: cfg.m,
            available: directions.len(),
        });
    }
    Ok(Projection {
        basis: orthonormalize(source.dim(), &directions)?,
        origin: ProjectionOrigin::Sketch(*cfg),
    })
}

/// `Tr(PᵀXᵀXP) / Tr(XᵀX)`
pub fn captured_variance(source: &DataSource, basis: &DenseMatrix) -> Result<f64> {
    let g = source.factor().matmul(basis)?;
    Ok(g.frobenius_norm_sq() / source.total_variance())
}

/// Smallest subspace dimension whose projection captures strictly more than
/// `cpev_target` of the total variance.
///
/// Candidates are the sketch (or exact) singular directions taken in order;
/// the search is bounded by `cfg.c` in randomized mode and by `min(n, d)` in
/// exact mode. `cfg.m` is ignored.
pub fn select_dimension(
    source: &DataSource,
    cpev_target: f64,
    cfg: &SketchConfig,
) -> Result<usize> {
    if !(cpev_target > 0.0 && cpev_target < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "target explained variance {cpev_target} must lie in (0, 1)"
        )));
    }
    let (n, d) = (source.samples(), source.dim());
    let limit = match cfg.mode {
        SketchMode::Randomized => cfg.c,
        SketchMode::ExactSvd => n.min(d),
    };
    SketchConfig { m: 1, ..*cfg }.validate(n, d)?;
    let directions = candidate_directions(source, cfg, limit)?;
    let q = orthonormalize(d, &directions)?;
    let g = source.factor().matmul(&q)?;
    let total = source.total_variance();
    let mut captured = 0.0;
    for j in 0..q.cols() {
        captured += (0..g.rows())
            .map(|i| g.get(i, j) * g.get(i, j))
            .sum::<f64>();
        if captured / total > cpev_target {
            return Ok(j + 1);
        }
    }
    Err(Error::Unreachable {
        target: cpev_target,
        max_dim: limit,
        best: captured / total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat<const C: usize>(rows: &[[f64; C]]) -> DenseMatrix {
        DenseMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn probabilities() {
        assert_eq!(
            row_probabilities(&mat(&[[1.0, 0.0], [0.0, 1.0]])).unwrap(),
            vec![0.5, 0.5]
        );
        assert_eq!(
            row_probabilities(&mat(&[[0.0, 0.0], [2.0, 1.0], [0.0, 0.0]])).unwrap(),
            vec![0.0, 1.0, 0.0]
        );
        let p = row_probabilities(&mat(&[[1.0, 0.0], [0.0, 2.0], [3.0, 0.0]])).unwrap();
        for (a, b) in p.iter().zip([1.0 / 14.0, 4.0 / 14.0, 9.0 / 14.0]) {
            assert!((a - b).abs() < 1e-15);
        }
        assert_eq!(
            row_probabilities(&DenseMatrix::zeros(2, 2)),
            Err(Error::ZeroMatrix)
        );
    }

    #[test]
    fn degenerate_distribution_reproduces_gram() {
        let x = mat(&[
            [0.0, 0.0, 0.0],
            [1.0, 2.0, 2.0],
            [0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0],
        ]);
        let xc = sample_sketch(&x, &SketchConfig::randomized(3, 1, 9)).unwrap();
        let third = 1.0 / 3f64.sqrt();
        for t in 0..3 {
            for (a, b) in xc.row(t).iter().zip([1.0, 2.0, 2.0]) {
                assert!((a - b * third).abs() < 1e-15);
            }
        }
        let diff = xc.gram().sub(&x.gram()).unwrap().max_abs();
        assert!(diff < 1e-14);
    }

    #[test]
    fn sketch_is_deterministic_per_seed() {
        let x = DenseMatrix::from_fn(8, 5, |i, j| ((i * 7 + j * 3) % 11) as f64 - 5.0);
        let cfg = SketchConfig::randomized(4, 2, 42);
        assert_eq!(
            sample_sketch(&x, &cfg).unwrap(),
            sample_sketch(&x, &cfg).unwrap()
        );
    }

    #[test]
    fn config_validation() {
        assert!(SketchConfig::randomized(3, 4, 0).validate(10, 10).is_err());
        assert!(SketchConfig::randomized(11, 4, 0).validate(10, 20).is_err());
        assert!(SketchConfig::randomized(4, 0, 0).validate(10, 10).is_err());
        assert!(SketchConfig::exact(10).validate(10, 12).is_ok());
        assert!(SketchConfig::exact(11).validate(10, 12).is_err());
    }

    #[test]
    fn rank_one_direction() {
        let u = [1.0, -2.0, 0.5];
        let v = [3.0, 0.0, 4.0];
        let x = DenseMatrix::from_fn(3, 3, |i, j| u[i] * v[j]);
        let src = DataSource::Raw { data: x };
        let p = initial_projection(&src, &SketchConfig::exact(1)).unwrap();
        let col = p.basis.column(0);
        let sign = col[0].signum();
        for (a, b) in col.iter().zip([0.6, 0.0, 0.8]) {
            assert!((a * sign - b).abs() < 1e-12);
        }
        assert!(matches!(
            initial_projection(&src, &SketchConfig::exact(2)),
            Err(Error::RankDeficient {
                requested: 2,
                available: 1
            })
        ));
    }

    #[test]
    fn full_space_projection() {
        let x = DenseMatrix::from_fn(4, 4, |i, j| if i == j { (i + 1) as f64 } else { 0.0 });
        let src = DataSource::Raw { data: x };
        let p = initial_projection(&src, &SketchConfig::exact(4)).unwrap();
        let ppt = p.basis.matmul(&p.basis.transpose()).unwrap();
        assert!(ppt.sub(&DenseMatrix::identity(4)).unwrap().max_abs() < 1e-9);
        assert!(p.orthonormality_error() < 1e-9);
    }

    #[test]
    fn select_dimension_on_diagonal_gram() {
        let src = DataSource::Raw {
            data: mat(&[[3.0, 0.0], [0.0, 1.0]]),
        };
        let cfg = SketchConfig::exact(1);
        assert_eq!(select_dimension(&src, 0.89, &cfg).unwrap(), 1);
        assert_eq!(select_dimension(&src, 0.95, &cfg).unwrap(), 2);
        assert!(select_dimension(&src, 1.0, &cfg).is_err());
    }
}
