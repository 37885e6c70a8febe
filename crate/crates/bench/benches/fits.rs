use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use spca_core::data::gaussian_source;
use spca_core::spca::TPowerConfig;
use spca_core::{spca_sp, tpower, SketchConfig, SpcaConfig, TruncationRule};

fn fits(c: &mut Criterion) {
    let mut group = c.benchmark_group("fit");
    group.sample_size(10);
    for d in [100usize, 400] {
        let src = gaussian_source(d + 1, d, 7).unwrap();
        let rule = TruncationRule::BySparsity(7 * d / 10);
        let cfg = SpcaConfig::new(
            20,
            SketchConfig::randomized(d / 2, (d / 4).min(80), 1),
            rule,
        );
        group.bench_with_input(BenchmarkId::new("spca_sp", d), &src, |b, src| {
            b.iter(|| spca_sp(src, &cfg).unwrap())
        });
        let tp = TPowerConfig::new(20, 7 * d / 10);
        group.bench_with_input(BenchmarkId::new("tpower", d), &src, |b, src| {
            b.iter(|| tpower(src, &tp).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, fits);
criterion_main!(benches);
