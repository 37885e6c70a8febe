use spca_core::data::{
    gaussian_source, pitprops_correlation, pitprops_source, synthetic_covariance, synthetic_source,
    SyntheticSpec,
};
use spca_core::linalg::{jacobi_eigen, DenseMatrix};

fn sample_covariance(n: usize, seed: u64) -> DenseMatrix {
    let src = synthetic_source(SyntheticSpec { n, seed }).unwrap();
    src.covariance_matrix().scaled(1.0 / n as f64)
}

fn relative_gap(a: &DenseMatrix, b: &DenseMatrix) -> f64 {
    a.sub(b).unwrap().frobenius_norm() / b.frobenius_norm()
}

#[test]
fn population_covariance_matches_a_million_samples() {
    let gap = relative_gap(&sample_covariance(1_000_000, 1), &synthetic_covariance());
    assert!(gap <= 0.01, "{gap}");
}

#[test]
fn hundred_thousand_samples_are_within_five_percent() {
    let gap = relative_gap(&sample_covariance(100_000, 2), &synthetic_covariance());
    assert!(gap <= 0.05, "{gap}");
}

#[test]
fn sampled_sources_are_centered() {
    let src = synthetic_source(SyntheticSpec { n: 500, seed: 3 }).unwrap();
    assert!(src.factor().column_means().iter().all(|m| m.abs() <= 1e-10));
    let g = gaussian_source(1001, 40, 3).unwrap();
    assert!(g.factor().column_means().iter().all(|m| m.abs() <= 1e-10));
    assert_eq!(g.samples(), 1001);
}

#[test]
fn pitprops_is_a_psd_correlation_matrix() {
    let a = pitprops_correlation().unwrap();
    assert_eq!(a.shape(), (13, 13));
    assert_eq!(a.max_asymmetry(), 0.0);
    assert!((0..13).all(|i| a.get(i, i) == 1.0));
    let e = jacobi_eigen(&a).unwrap();
    assert!(*e.eigenvalues.last().unwrap() >= -1e-8);
    let top6: f64 = e.eigenvalues[..6].iter().sum::<f64>() / 13.0;
    assert!((top6 - 0.869).abs() <= 2e-3, "{top6}");

    let src = pitprops_source().unwrap();
    let f = src.factor();
    let back = f.gram();
    assert!(back.sub(&a).unwrap().frobenius_norm() <= 1e-8 * a.frobenius_norm());
}
