use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use spca_bench::{gaussian, gram};
use spca_core::linalg::{jacobi_eigen, power_method, PowerOptions, ReflectorStack};

fn reflector_push(c: &mut Criterion) {
    let mut group = c.benchmark_group("reflector_push");
    for d in [100usize, 400, 1000] {
        let cols = gaussian(d, 20, 1).columns();
        group.bench_with_input(BenchmarkId::from_parameter(d), &cols, |b, cols| {
            b.iter(|| {
                let mut stack = ReflectorStack::new(d);
                for col in cols {
                    stack.push_column(col).unwrap();
                }
                stack
            })
        });
    }
    group.finish();
}

fn jacobi(c: &mut Criterion) {
    let mut group = c.benchmark_group("jacobi_eigen");
    group.sample_size(10);
    for n in [20usize, 80, 200] {
        let a = gram(n, 2);
        group.bench_with_input(BenchmarkId::from_parameter(n), &a, |b, a| {
            b.iter(|| jacobi_eigen(a).unwrap())
        });
    }
    group.finish();
}

fn power(c: &mut Criterion) {
    let mut group = c.benchmark_group("power_method");
    for n in [20usize, 80] {
        let a = gram(n, 3);
        group.bench_with_input(BenchmarkId::from_parameter(n), &a, |b, a| {
            b.iter(|| power_method(a, PowerOptions::default()).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, reflector_push, jacobi, power);
criterion_main!(benches);
