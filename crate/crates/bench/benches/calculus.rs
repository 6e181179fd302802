use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use hermitia::spectral::full_resolution;
use hermitia::{calculus, oracle, Method, ToleranceConfig};
use hermitia_bench::{generic, positive, singular};

const DIMS: [usize; 3] = [4, 8, 16];

fn eig(c: &mut Criterion) {
    let mut group = c.benchmark_group("jacobi_eig");
    for n in DIMS {
        let g = generic(n, 1);
        group.bench_with_input(BenchmarkId::from_parameter(n), &g, |b, g| b.iter(|| oracle::eig(black_box(g))));
    }
    group.finish();
}

fn sqrt(c: &mut Criterion) {
    let tol = ToleranceConfig::default();
    let oracle_tol = tol.with_method(Method::Oracle);
    let mut group = c.benchmark_group("sqrt");
    for n in DIMS {
        let g = positive(n, 2);
        let k = singular(n, 3);
        group.bench_with_input(BenchmarkId::new("iterative", n), &g, |b, g| b.iter(|| calculus::sqrt(black_box(g), &tol)));
        group.bench_with_input(BenchmarkId::new("iterative_kernel", n), &k, |b, g| {
            b.iter(|| calculus::sqrt(black_box(g), &tol))
        });
        group.bench_with_input(BenchmarkId::new("oracle", n), &g, |b, g| b.iter(|| calculus::sqrt(black_box(g), &oracle_tol)));
    }
    group.finish();
}

fn carrier(c: &mut Criterion) {
    let tol = ToleranceConfig::default();
    let mut group = c.benchmark_group("carrier");
    for n in DIMS {
        let g = singular(n, 4);
        group.bench_with_input(BenchmarkId::from_parameter(n), &g, |b, g| b.iter(|| calculus::carrier(black_box(g), &tol)));
    }
    group.finish();
}

fn resolution(c: &mut Criterion) {
    let tol = ToleranceConfig::default();
    let mut group = c.benchmark_group("full_resolution");
    group.sample_size(10);
    for n in [4, 8] {
        let g = generic(n, 5);
        group.bench_with_input(BenchmarkId::from_parameter(n), &g, |b, g| b.iter(|| full_resolution(black_box(g), 16, &tol)));
    }
    group.finish();
}

criterion_group!(benches, eig, sqrt, carrier, resolution);
criterion_main!(benches);
