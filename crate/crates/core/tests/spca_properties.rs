use spca_core::data::{gaussian_source, pitprops_source, synthetic_source, SyntheticSpec};
use spca_core::linalg::{jacobi_eigen, power_method, qr_factor, vector, DenseMatrix, PowerOptions};
use spca_core::rng;
use spca_core::spca::{tpower_observed, SpcaEngine, TPowerConfig};
use spca_core::truncation::orthogonality_measure;
use spca_core::{
    deflation_pca, spca_sp, DataSource, QrMode, SketchConfig, SpcaConfig, TruncationRule,
};

fn gaussian_cov(n: usize, d: usize, seed: u64) -> DataSource {
    let mut r = rng::seeded(seed);
    let x = DenseMatrix::from_vec(n, d, rng::gaussian_vec(&mut r, n * d)).unwrap();
    DataSource::covariance(x.gram()).unwrap()
}

/// Aligns `b`'s sign to `a` and returns the max entrywise gap.
fn signed_gap(a: &[f64], b: &[f64]) -> f64 {
    let s = if vector::dot(a, b) < 0.0 { -1.0 } else { 1.0 };
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - s * y).abs())
        .fold(0.0, f64::max)
}

fn corpus() -> Vec<(String, DataSource, SpcaConfig)> {
    let mut out = Vec::new();
    let rules = |d: usize| {
        vec![
            TruncationRule::BySparsity(d / 2),
            TruncationRule::ByEnergy(0.1),
            TruncationRule::ByEnergy(0.3),
            TruncationRule::HardThreshold(0.5 / (d as f64).sqrt()),
        ]
    };
    for seed in 0..6u64 {
        for &(n, d) in &[(40, 12), (25, 30), (60, 20)] {
            let src = gaussian_source(n, d, seed).unwrap();
            for (k, rule) in rules(d).into_iter().enumerate() {
                let sk = SketchConfig::randomized(
                    d.min(n),
                    4 + (seed as usize % 4),
                    rng::derive_seed(seed, k as u64),
                );
                let r = 6 + k;
                out.push((
                    format!("gauss{n}x{d}/{seed}/{rule}"),
                    src.clone(),
                    SpcaConfig::new(r, sk, rule),
                ));
            }
        }
    }
    let pit = pitprops_source().unwrap();
    for seed in 0..5u64 {
        for rule in [
            TruncationRule::BySparsity(10),
            TruncationRule::ByEnergy(0.4),
            TruncationRule::HardThreshold(0.35),
        ] {
            out.push((
                format!("pitprops/{seed}/{rule}"),
                pit.clone(),
                SpcaConfig::new(6, SketchConfig::randomized(13, 3, seed), rule),
            ));
        }
    }
    let syn = synthetic_source(SyntheticSpec { n: 0, seed: 0 }).unwrap();
    for rule in [TruncationRule::BySparsity(4), TruncationRule::ByEnergy(0.2)] {
        out.push((
            format!("synthetic/{rule}"),
            syn.clone(),
            SpcaConfig::new(8, SketchConfig::exact(3), rule),
        ));
    }
    // Subspace that runs out of room: t + m > d.
    let small = gaussian_source(30, 8, 99).unwrap();
    out.push((
        "tight".into(),
        small,
        SpcaConfig::new(8, SketchConfig::exact(6), TruncationRule::BySparsity(3)),
    ));
    out
}

#[test]
fn every_projection_is_orthogonal_to_all_loadings() {
    let mut fits = 0;
    for (name, src, cfg) in corpus() {
        let mut engine = SpcaEngine::new(&src, cfg).unwrap_or_else(|e| panic!("{name}: {e}"));
        while !engine.is_finished() {
            engine.step().unwrap_or_else(|e| panic!("{name}: {e}"));
            if !engine.is_finished() {
                let res = engine.projection_residual();
                assert!(
                    res <= 1e-10,
                    "{name}: round {} residual {res:e}",
                    engine.loadings().len()
                );
                assert!(
                    engine
                        .projection()
                        .gram()
                        .sub(&DenseMatrix::identity(engine.projection().cols()))
                        .unwrap()
                        .max_abs()
                        <= 1e-9
                );
            }
        }
        fits += 1;
    }
    assert!(fits > 80);
}

#[test]
fn stacked_projection_equals_full_qr_of_compound_matrix() {
    let mut cases = 0;
    for seed in 0..60u64 {
        let mut r = rng::seeded(seed);
        let d = 6 + (rng::uniform(&mut r) * 25.0) as usize; // 6..=30
        let m = 1 + (rng::uniform(&mut r) * 8.0) as usize; // 1..=8
        let rounds = 2 + (rng::uniform(&mut r) * 5.0) as usize; // 2..=6
        let m = m.min(d - 1);
        let rounds = rounds.min(d);
        let src = gaussian_source(d + 5, d, seed).unwrap();
        let rule = match seed % 3 {
            0 => TruncationRule::BySparsity(d / 2),
            1 => TruncationRule::ByEnergy(0.25),
            _ => TruncationRule::BySparsity(1),
        };
        let cfg = SpcaConfig::new(rounds, SketchConfig::exact(m), rule);
        let mut engine = SpcaEngine::new(&src, cfg).unwrap();
        for t in 1..rounds {
            let previous = engine.projection().clone();
            engine.step().unwrap();
            let mut b: Vec<Vec<f64>> = engine.loadings().to_vec();
            b.extend(previous.columns());
            b.truncate(d);
            let (q, _) = qr_factor(&DenseMatrix::from_columns(d, &b).unwrap()).unwrap();
            let p = engine.projection();
            assert_eq!(p.cols(), m.min(d - t), "seed {seed} round {t}");
            for j in 0..p.cols() {
                let gap = signed_gap(&q.column(t + j), &p.column(j));
                assert!(gap <= 1e-9, "seed {seed} round {t} column {j}: {gap:e}");
            }
        }
        cases += 1;
    }
    assert!(cases >= 50);
}

#[test]
fn naive_mode_reproduces_stacked_fits() {
    for seed in 0..10u64 {
        let src = gaussian_source(40, 20, seed).unwrap();
        let cfg = SpcaConfig::new(
            6,
            SketchConfig::randomized(15, 6, seed),
            TruncationRule::BySparsity(8),
        );
        let a = spca_sp(&src, &cfg).unwrap();
        let b = spca_sp(&src, &cfg.with_qr_mode(QrMode::Naive)).unwrap();
        assert!(
            a.loadings.sub(&b.loadings).unwrap().max_abs() <= 1e-9,
            "seed {seed}"
        );
    }
}

#[test]
fn untruncated_full_subspace_recovers_principal_components() {
    let src = gaussian_cov(20, 8, 314);
    let d = 8;
    let cfg = SpcaConfig::new(d, SketchConfig::exact(d), TruncationRule::BySparsity(0));
    let res = spca_sp(&src, &cfg).unwrap();
    let e = jacobi_eigen(&src.covariance_matrix()).unwrap();
    for j in 0..d {
        let gap = signed_gap(&e.eigenvector(j), &res.loading(j));
        assert!(gap <= 1e-7, "component {j}: {gap:e}");
    }
}

#[test]
fn power_vector_solves_the_rank_one_problem() {
    for seed in 0..5u64 {
        let src = gaussian_source(15, 9, seed).unwrap();
        let cfg = SpcaConfig::new(
            3,
            SketchConfig::randomized(8, 4, seed),
            TruncationRule::BySparsity(3),
        );
        let mut engine = SpcaEngine::new(&src, cfg).unwrap();
        for _ in 0..cfg.r {
            let xp = src.factor().matmul(engine.projection()).unwrap();
            let alpha = power_method(&xp.gram(), PowerOptions::default())
                .unwrap()
                .vector;
            let u = xp.mul_vec(&alpha).unwrap();
            let sigma = vector::norm(&u);
            let beta: Vec<f64> = u.iter().map(|v| v / sigma).collect();
            let objective = |a: &[f64], b: &[f64], s: f64| {
                let mut total = 0.0;
                for (i, bi) in b.iter().enumerate() {
                    for (j, aj) in a.iter().enumerate() {
                        let v = xp.get(i, j) - s * bi * aj;
                        total += v * v;
                    }
                }
                total
            };
            let best = objective(&alpha, &beta, sigma);
            let mut r = rng::seeded(rng::derive_seed(seed, 777));
            for _ in 0..200 {
                let mut a = rng::gaussian_vec(&mut r, xp.cols());
                let mut b = rng::gaussian_vec(&mut r, xp.rows());
                vector::normalize(&mut a);
                vector::normalize(&mut b);
                // Best scale for this pair.
                let s = vector::dot(&b, &xp.mul_vec(&a).unwrap());
                assert!(best <= objective(&a, &b, s) + 1e-9 * best.max(1.0));
            }
            engine.step().unwrap();
        }
    }
}

#[test]
fn energy_truncated_loadings_are_nearly_orthogonal() {
    let mut sources = vec![
        pitprops_source().unwrap(),
        synthetic_source(SyntheticSpec { n: 0, seed: 0 }).unwrap(),
    ];
    for seed in 0..4 {
        sources.push(gaussian_source(50, 16, seed).unwrap());
    }
    for src in &sources {
        let d = src.dim();
        for kappa in [0.05, 0.1, 0.2] {
            let cfg = SpcaConfig::new(
                5,
                SketchConfig::exact(5.min(d - 1)),
                TruncationRule::ByEnergy(kappa),
            );
            let res = spca_sp(src, &cfg).unwrap();
            for i in 0..5 {
                for j in i + 1..5 {
                    let o = orthogonality_measure(&res.loading(i), &res.loading(j)).unwrap();
                    assert!(
                        o >= 1.0 - kappa.sqrt() - 0.05,
                        "kappa {kappa} pair ({i},{j}): {o}"
                    );
                }
            }
        }
    }
}

#[test]
fn fits_are_deterministic() {
    let src = gaussian_source(60, 25, 5).unwrap();
    let cfg = SpcaConfig::new(
        5,
        SketchConfig::randomized(20, 6, 9),
        TruncationRule::ByEnergy(0.2),
    );
    let a = spca_sp(&src, &cfg).unwrap();
    let b = spca_sp(&src, &cfg).unwrap();
    assert_eq!(a.loadings, b.loadings);
    assert_eq!(a.rounds.len(), b.rounds.len());
    for (x, y) in a.rounds.iter().zip(&b.rounds) {
        assert_eq!(
            (x.power_iters, x.adjusted_variance, x.truncated_energy),
            (y.power_iters, y.adjusted_variance, y.truncated_energy)
        );
    }
}

#[test]
fn loadings_are_unit_and_nonzero() {
    for (name, src, cfg) in corpus().into_iter().step_by(7) {
        let res = spca_sp(&src, &cfg).unwrap();
        for j in 0..cfg.r {
            let z = res.loading(j);
            assert!((vector::norm(&z) - 1.0).abs() <= 1e-12, "{name}");
            let peak = vector::argmax_abs(&z).unwrap();
            assert!(z[peak] > 0.0, "{name}");
        }
    }
}

#[test]
fn synthetic_blocks_for_every_rule() {
    let src = synthetic_source(SyntheticSpec { n: 0, seed: 0 }).unwrap();
    let rules = [
        TruncationRule::ByEnergy(0.2),
        TruncationRule::HardThreshold(1.0 / 10f64.sqrt()),
    ];
    for rule in rules {
        let res = spca_sp(&src, &SpcaConfig::new(2, SketchConfig::exact(3), rule)).unwrap();
        let (z1, z2) = (res.loading(0), res.loading(1));
        assert!(
            z2[..4].iter().all(|v| (v - 0.5).abs() <= 1e-3),
            "{rule}: {z2:?}"
        );
        assert!(z2[4..].iter().all(|v| *v == 0.0), "{rule}");
        assert!(z1[..4].iter().all(|v| *v == 0.0), "{rule}");
        assert!(
            z1[4..].iter().all(|v| (0.40..=0.42).contains(v)),
            "{rule}: {z1:?}"
        );
    }
    let res = spca_sp(
        &src,
        &SpcaConfig::new(2, SketchConfig::exact(3), TruncationRule::BySparsity(4)),
    )
    .unwrap();
    let z2 = res.loading(1);
    assert!(z2[..4].iter().all(|v| v.abs() > 0.45));
    assert!(
        z2[8..].iter().all(|v| (v.abs() - 0.0978).abs() <= 3e-3),
        "{z2:?}"
    );
}

// ---- baselines ----

/// Top eigenvalue over every `keep`-sparse support, by enumeration.
fn best_restricted_eigenvalue(a: &DenseMatrix, keep: usize) -> f64 {
    let d = a.rows();
    let mut best = f64::NEG_INFINITY;
    for mask in 0u32..(1 << d) {
        if mask.count_ones() as usize != keep {
            continue;
        }
        let idx: Vec<usize> = (0..d).filter(|i| mask & (1 << i) != 0).collect();
        let sub = DenseMatrix::from_fn(keep, keep, |i, j| a.get(idx[i], idx[j]));
        best = best.max(jacobi_eigen(&sub).unwrap().eigenvalues[0]);
    }
    best
}

#[test]
fn tpower_is_monotone_and_locally_optimal() {
    for seed in 0..50 {
        let src = gaussian_cov(20, 8, 1000 + seed);
        let a = src.covariance_matrix();
        let mut last = f64::NEG_INFINITY;
        let res = tpower_observed(&src, &TPowerConfig::new(1, 4), |_, k, v| {
            if k > 0 {
                assert!(
                    v >= last - 1e-12 * v.abs().max(1.0),
                    "seed {seed}: objective fell at {k}"
                );
            }
            last = v;
        })
        .unwrap();
        assert!(res.rounds[0].converged);
        let z = res.loading(0);
        let support: Vec<usize> = (0..8).filter(|&i| z[i] != 0.0).collect();
        assert_eq!(support.len(), 4);
        let value = vector::dot(&z, &a.mul_vec(&z).unwrap());
        // A fixed point is the leading eigenvector of its own support.
        let sub = DenseMatrix::from_fn(4, 4, |i, j| a.get(support[i], support[j]));
        let own = jacobi_eigen(&sub).unwrap().eigenvalues[0];
        assert!((value - own).abs() <= 1e-9 * own, "seed {seed}");
        assert!(value <= best_restricted_eigenvalue(&a, 4) * (1.0 + 1e-9));
    }
}

#[test]
fn deflation_pca_recovers_constructed_spectrum() {
    let d = 6;
    let mut r = rng::seeded(55);
    let g = DenseMatrix::from_vec(d, d, rng::gaussian_vec(&mut r, d * d)).unwrap();
    let (q, _) = qr_factor(&g).unwrap();
    let lambda = [10.0, 6.0, 3.0, 1.5, 0.7, 0.2];
    let a = DenseMatrix::from_fn(d, d, |i, j| {
        (0..d).map(|k| q.get(i, k) * lambda[k] * q.get(j, k)).sum()
    });
    let a = DenseMatrix::from_fn(d, d, |i, j| 0.5 * (a.get(i, j) + a.get(j, i)));
    let src = DataSource::covariance(a).unwrap();
    let res = deflation_pca(&src, 3).unwrap();
    for j in 0..3 {
        assert!(
            signed_gap(&q.column(j), &res.loading(j)) <= 1e-7,
            "component {j}"
        );
    }
    let full = deflation_pca(&src, d).unwrap();
    let g = full.loadings.gram();
    assert!(g.sub(&DenseMatrix::identity(d)).unwrap().max_abs() <= 1e-9);
}
