//! Rayon pool of one thread vs the default pool on the per-column scans.
//!
//! For the fully sequential code path run
//! `cargo bench -p playprof --no-default-features --bench parallel`.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use playprof::telemetry::{generate_population, hard_assign, interpolate_missing, SyntheticSpec};
use playprof::{kmeans, sivm_select, solve_convex_coefficients, ConvexSolveOptions, DenseMatrix, RandomSeed, SolverOptions};
use std::hint::black_box;

fn population() -> DenseMatrix {
    let spec = SyntheticSpec::scaled(400, 8000, RandomSeed(1));
    let (t, _) = generate_population(&spec).unwrap();
    interpolate_missing(t).unwrap().into_matrix()
}

fn pools() -> Vec<(String, rayon::ThreadPool)> {
    let default = rayon::current_num_threads();
    let mut sizes = vec![1];
    if default > 1 {
        sizes.push(default);
    }
    sizes
        .into_iter()
        .map(|n| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap();
            (format!("{n}-thread"), pool)
        })
        .collect()
}

fn scans(c: &mut Criterion) {
    let v = population();
    let opts = SolverOptions::with_k(8);
    let selection = sivm_select(&v, 8, RandomSeed(0)).unwrap();
    let w = v.select_columns(&selection.indices);
    let clusters = kmeans(&v, &opts).unwrap();

    let mut group = c.benchmark_group("scans");
    group.sample_size(10);
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::new("sivm_select", &name), |b| {
            b.iter(|| pool.install(|| sivm_select(black_box(&v), 8, RandomSeed(0)).unwrap()))
        });
        group.bench_function(BenchmarkId::new("convex_solve", &name), |b| {
            b.iter(|| pool.install(|| solve_convex_coefficients(black_box(&v), &w, &ConvexSolveOptions::default()).unwrap()))
        });
        group.bench_function(BenchmarkId::new("kmeans", &name), |b| {
            b.iter(|| pool.install(|| kmeans(black_box(&v), &opts).unwrap()))
        });
        group.bench_function(BenchmarkId::new("hard_assign", &name), |b| {
            b.iter(|| pool.install(|| hard_assign(black_box(&v), &clusters).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, scans);
criterion_main!(benches);
