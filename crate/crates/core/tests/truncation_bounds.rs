use proptest::prelude::*;
use spca_core::linalg::vector;
use spca_core::rng::{self, SeededRng};
use spca_core::truncation::{
    generic_orthogonality_bound, orthogonality_measure, rule_orthogonality_bound, sparsity,
    sparsity_bounds, truncate,
};
use spca_core::{Error, TruncationRule};

const DIMS: [usize; 4] = [5, 13, 50, 200];
const PAIRS_PER_DIM: usize = 1000;
const SLACK: f64 = 1e-12;

fn unit(r: &mut SeededRng, d: usize) -> Vec<f64> {
    let mut v = rng::gaussian_vec(r, d);
    vector::normalize(&mut v);
    v
}

/// Unit `(a, b)` with `aᵀb = 0`.
fn orthogonal_pair(r: &mut SeededRng, d: usize) -> (Vec<f64>, Vec<f64>) {
    let b = unit(r, d);
    let mut a = rng::gaussian_vec(r, d);
    let s = vector::dot(&a, &b);
    vector::axpy(-s, &b, &mut a);
    vector::normalize(&mut a);
    (a, b)
}

fn random_rule(r: &mut SeededRng, kind: usize, d: usize) -> TruncationRule {
    let u = rng::uniform(r);
    match kind {
        0 => TruncationRule::BySparsity(1 + (u * (d - 1) as f64) as usize),
        1 => TruncationRule::ByEnergy(0.01 + 0.98 * u),
        _ => TruncationRule::HardThreshold((0.1 + 1.9 * u) / (d as f64).sqrt()),
    }
}

/// Runs every bound over the corpus for one rule family; returns the number of
/// pairs actually checked.
fn check_family(kind: usize) -> usize {
    let mut checked = 0;
    for &d in &DIMS {
        let mut r = rng::seeded(rng::derive_seed(0xB0_0D5, (kind * 1000 + d) as u64));
        for _ in 0..PAIRS_PER_DIM {
            let (a, b) = orthogonal_pair(&mut r, d);
            let rule = random_rule(&mut r, kind, d);
            let bp = match truncate(&b, rule) {
                Ok(v) => v,
                Err(Error::AllEntriesTruncated { .. }) => continue,
                Err(e) => panic!("{e}"),
            };
            let s = sparsity(&bp);
            let (lo, hi) = sparsity_bounds(rule, d);
            assert!(
                s >= lo - SLACK && s <= hi + SLACK,
                "{rule} d={d}: s={s} not in [{lo}, {hi}]"
            );
            if let TruncationRule::BySparsity(k) = rule {
                assert_eq!(bp.iter().filter(|v| **v == 0.0).count(), k);
            }

            let orth = orthogonality_measure(&a, &bp).unwrap();
            let lemma = generic_orthogonality_bound(&bp);
            assert!(orth >= lemma - SLACK, "{rule} d={d}: {orth} < {lemma}");
            let prop = rule_orthogonality_bound(rule, &bp);
            assert!(orth >= prop - SLACK, "{rule} d={d}: {orth} < {prop}");
            checked += 1;
        }
    }
    checked
}

#[test]
fn sparsity_rule_bounds() {
    assert_eq!(check_family(0), DIMS.len() * PAIRS_PER_DIM);
}

#[test]
fn energy_rule_bounds() {
    assert_eq!(check_family(1), DIMS.len() * PAIRS_PER_DIM);
}

#[test]
fn threshold_rule_bounds() {
    // Thresholds above every entry are legitimately rejected; most pairs still count.
    assert!(check_family(2) >= DIMS.len() * PAIRS_PER_DIM * 3 / 4);
}

#[test]
fn rule_bounds_are_no_weaker_than_lemma_for_sparsity_and_energy() {
    // The per-rule bounds are derived from the lemma, so they can only be
    // smaller than the lemma bound evaluated on the same vector.
    let mut r = rng::seeded(77);
    for _ in 0..500 {
        let b = unit(&mut r, 30);
        for rule in [
            TruncationRule::BySparsity(10),
            TruncationRule::ByEnergy(0.3),
        ] {
            let bp = truncate(&b, rule).unwrap();
            assert!(
                rule_orthogonality_bound(rule, &bp) <= generic_orthogonality_bound(&bp) + SLACK
            );
        }
    }
}

fn distinct_vec() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0..1.0f64, 2..40)
        .prop_filter("nonzero", |v| v.iter().any(|x| *x != 0.0))
}

proptest! {
    #[test]
    fn hard_threshold_is_idempotent(z in distinct_vec(), h in 0.0..0.9f64) {
        let rule = TruncationRule::HardThreshold(h);
        if let Ok(once) = truncate(&z, rule) {
            prop_assert_eq!(truncate(&once, rule).unwrap(), once);
        }
    }

    #[test]
    fn reapplied_energy_rule_stays_within_budget(z in distinct_vec(), e in 0.01..0.99f64) {
        let rule = TruncationRule::ByEnergy(e);
        let once = truncate(&z, rule).unwrap();
        let twice = truncate(&once, rule).unwrap();
        let removed: f64 = once.iter().zip(&twice).map(|(a, b)| (a - b) * (a - b)).sum();
        prop_assert!(removed <= e * vector::dot(&once, &once) + SLACK);
    }

    #[test]
    fn reapplied_sparsity_rule_zeroes_exactly_kappa(z in distinct_vec(), frac in 0.0..1.0f64) {
        let d = z.len();
        let k = 1 + ((d - 1) as f64 * frac) as usize;
        if k < d {
            let rule = TruncationRule::BySparsity(k);
            let once = truncate(&z, rule).unwrap();
            let twice = truncate(&once, rule).unwrap();
            // The k smallest of `once` include its k zeros, so nothing else moves.
            prop_assert!(twice.iter().filter(|v| **v == 0.0).count() >= k);
            prop_assert!(twice.iter().zip(&once).all(|(a, b)| *a == 0.0 || a == b));
        }
    }

    #[test]
    fn truncation_only_zeroes_entries(z in distinct_vec(), e in 0.01..0.99f64) {
        let out = truncate(&z, TruncationRule::ByEnergy(e)).unwrap();
        prop_assert!(out.iter().zip(&z).all(|(a, b)| *a == 0.0 || a == b));
        prop_assert!(out.iter().any(|v| *v != 0.0));
    }
}
