//! Sequential vs. parallel execution of the exhaustive oracles and of
//! batch analysis.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ffsync::cli::parse_system;
use ffsync::dynamics::{oracle_consensus_exhaustive_with, oracle_sync_exhaustive_with};
use ffsync::network::analyze_batch;
use ffsync::par::Execution;
use ffsync::{BasisChoice, Matrix, NetworkSystem, PrimeField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const STRATEGIES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn load(name: &str) -> NetworkSystem {
    let path = format!("{}/systems/{name}", env!("CARGO_MANIFEST_DIR"));
    parse_system(&std::fs::read_to_string(path).unwrap())
        .unwrap()
        .system
}

fn batch(count: usize) -> Vec<NetworkSystem> {
    let f = PrimeField::new(3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    (0..count)
        .map(|_| {
            let a = Matrix::from_fn(f, 6, 6, |_, _| rng.gen_range(0..3));
            NetworkSystem::new(3, 2, a).unwrap()
        })
        .collect()
}

fn exhaustive(c: &mut Criterion) {
    let mut g = c.benchmark_group("exhaustive_sync");
    g.sample_size(10);
    let ex2 = load("example2.txt");
    for (name, exec) in STRATEGIES {
        g.bench_with_input(BenchmarkId::new(name, "example2"), &ex2, |b, s| {
            b.iter(|| oracle_sync_exhaustive_with(black_box(s), 1 << 20, exec).unwrap())
        });
    }
    g.finish();

    let mut g = c.benchmark_group("exhaustive_consensus");
    g.sample_size(10);
    let ex3 = load("example3.txt");
    for (name, exec) in STRATEGIES {
        g.bench_with_input(BenchmarkId::new(name, "example3"), &ex3, |b, s| {
            b.iter(|| oracle_consensus_exhaustive_with(black_box(s), 2_000_000, exec).unwrap())
        });
    }
    g.finish();
}

fn batch_analysis(c: &mut Criterion) {
    let systems = batch(256);
    let mut g = c.benchmark_group("analyze_batch");
    for (name, exec) in STRATEGIES {
        g.bench_with_input(BenchmarkId::new(name, systems.len()), &systems, |b, s| {
            b.iter(|| analyze_batch(black_box(s), &BasisChoice::Canonical, exec))
        });
    }
    g.finish();
}

criterion_group!(benches, exhaustive, batch_analysis);
criterion_main!(benches);
