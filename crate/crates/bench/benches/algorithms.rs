use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use std::hint::black_box;

use kcuckoo::{matching_orient, orientation_threshold, peel, rank_and_solve, selfless_orient};
use kcuckoo_bench::{hypergraph, system, SEED, SIZES};

/// Just below the k = 3, ℓ = 1 threshold, where both orientation methods
/// usually succeed and do their full work.
const LOAD: f64 = 0.91;

fn orientation(c: &mut Criterion) {
    let mut group = c.benchmark_group("orientation");
    group.sample_size(10);
    for m in SIZES {
        let g = hypergraph(m, 3, LOAD);
        group.throughput(Throughput::Elements(g.n() as u64));
        group.bench_with_input(BenchmarkId::new("selfless", m), &g, |b, g| {
            b.iter(|| selfless_orient(black_box(g), 1, SEED))
        });
        group.bench_with_input(BenchmarkId::new("matching", m), &g, |b, g| {
            b.iter(|| matching_orient(black_box(g), 1))
        });
    }
    group.finish();
}

fn peeling(c: &mut Criterion) {
    let mut group = c.benchmark_group("peel");
    for m in SIZES {
        let g = hypergraph(m, 3, 0.95);
        group.throughput(Throughput::Elements(g.n() as u64));
        group.bench_with_input(BenchmarkId::new("two_core", m), &g, |b, g| {
            b.iter(|| peel(black_box(g), 2))
        });
    }
    group.finish();
}

fn elimination(c: &mut Criterion) {
    let mut group = c.benchmark_group("xorsat");
    group.sample_size(10);
    // Elimination is cubic; the largest size is left out.
    for m in &SIZES[..2] {
        let s = system(*m, 3, LOAD);
        group.throughput(Throughput::Elements(s.equations() as u64));
        group.bench_with_input(BenchmarkId::new("rank", m), &s, |b, s| {
            b.iter(|| rank_and_solve(black_box(s)))
        });
    }
    group.finish();
}

fn thresholds(c: &mut Criterion) {
    c.bench_function("threshold/k3_ell2", |b| {
        b.iter(|| orientation_threshold(black_box(3), black_box(2)))
    });
}

criterion_group!(benches, orientation, peeling, elimination, thresholds);
criterion_main!(benches);
