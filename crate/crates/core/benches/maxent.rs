//! Parallel versus sequential throughput of the data-parallel hot spots.
//!
//! `pool` runs on rayon's global pool; `single` runs the same work inside a
//! one-thread pool, which is what the sequential fallback amounts to.

use std::f64::consts::PI;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use maxent_core::hamiltonian2q::{self, TwoQubitAlphas};
use maxent_core::par;
use maxent_core::synthesize::{first_columns_gate, SynthesisSeed};
use maxent_core::{certify, certify_adjoint, FeasibilityOptions};

fn single_pool() -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap()
}

fn compare<F: Fn() -> usize + Sync>(c: &mut Criterion, group: &str, sample_size: usize, work: F) {
    let single = single_pool();
    let mut g = c.benchmark_group(group);
    g.sample_size(sample_size);
    g.bench_function(BenchmarkId::new("pool", rayon::current_num_threads()), |b| b.iter(&work));
    g.bench_function(BenchmarkId::new("single", 1), |b| b.iter(|| single.install(&work)));
    g.finish();
}

/// Restarts of one search that exhausts its budget (adjoint is NOT_FOUND).
fn restarts(c: &mut Criterion) {
    let gate = first_columns_gate(SynthesisSeed { rng_seed: 0, da: 2, db: 4 }).unwrap();
    let opts = FeasibilityOptions::default();
    compare(c, "certify_restarts", 10, || {
        let cert = certify_adjoint(&gate, &opts).unwrap();
        cert.is_certified() as usize
    });
}

fn hamiltonian_grid(c: &mut Criterion) {
    let n = 8;
    let opts = FeasibilityOptions::default();
    compare(c, "hamiltonian_grid", 10, || {
        par::map_range(n * n * n, |i| {
            let a = [i / (n * n), (i / n) % n, i % n].map(|k| k as f64 * PI / n as f64);
            let gate = hamiltonian2q::gate(TwoQubitAlphas::new(a[0], a[1], a[2])).unwrap();
            certify(&gate, &opts).unwrap().is_certified()
        })
        .into_iter()
        .filter(|&ok| ok)
        .count()
    });
}

fn seed_scan(c: &mut Criterion) {
    let opts = FeasibilityOptions::default();
    compare(c, "first_columns_seed_scan", 10, || {
        par::map_range(16, |s| {
            let gate = first_columns_gate(SynthesisSeed { rng_seed: s as u64, da: 2, db: 5 }).unwrap();
            certify(&gate, &opts).unwrap().is_certified()
        })
        .into_iter()
        .filter(|&ok| ok)
        .count()
    });
}

criterion_group!(benches, restarts, hamiltonian_grid, seed_scan);
criterion_main!(benches);
