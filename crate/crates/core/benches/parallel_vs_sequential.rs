use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use substream::oracles::CoverageInstance;
use substream::partition::simulate_active_windows;
use substream::rng::CounterRng;
use substream::{par, random_permutation, run_monotone, StreamConfig, ValueOracle};

fn coverage(n: usize, universe: usize) -> CoverageInstance {
    let rng = CounterRng::new(7, 0);
    let sets = (0..n as u64)
        .map(|s| (0..universe as u32).filter(|&u| rng.f64_at(s * universe as u64 + u as u64) < 0.05).collect())
        .collect();
    CoverageInstance::new(sets, universe).unwrap()
}

fn sweep(inst: &CoverageInstance, seeds: usize, parallel: bool) -> f64 {
    let run = |s: usize| {
        let o = ValueOracle::weak(inst, 10);
        let order = random_permutation(inst.len(), s as u64).unwrap();
        run_monotone(&o, &order, StreamConfig::new(10, 4.0, s as u64)).unwrap().best_value
    };
    let values = if parallel { par::map_range(seeds, run) } else { par::map_range_sequential(seeds, run) };
    values.iter().sum()
}

fn seed_sweep(c: &mut Criterion) {
    let inst = coverage(400, 300);
    let mut group = c.benchmark_group("monotone_seed_sweep");
    group.sample_size(10);
    for seeds in [8usize, 32] {
        group.bench_with_input(BenchmarkId::new("sequential", seeds), &seeds, |b, &s| {
            b.iter(|| black_box(sweep(&inst, s, false)))
        });
        group.bench_with_input(BenchmarkId::new("parallel", seeds), &seeds, |b, &s| {
            b.iter(|| black_box(sweep(&inst, s, true)))
        });
    }
    group.finish();
}

fn active_windows(c: &mut Criterion) {
    let mut group = c.benchmark_group("active_window_monte_carlo");
    group.sample_size(10);
    group.bench_function("trials_2000", |b| {
        b.iter(|| black_box(simulate_active_windows(50, 10.0, 20.0, 2000, 1).unwrap()))
    });
    group.finish();
}

criterion_group!(benches, seed_sweep, active_windows);
criterion_main!(benches);
