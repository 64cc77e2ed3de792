//! Compares the rayon evaluation path against the sequential fallback on
//! the two data-parallel hot loops: GA candidate evaluation and the
//! exhaustive oracle.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pdptw::bounds::weights_for;
use pdptw::evolution::{
    evaluate_candidates, evaluate_candidates_seq, init_population, Chromosome, GaConfig,
    PlanContext,
};
use pdptw::instance::{generate_synthetic, parse_lilim, Instance};
use pdptw::oracle;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;

fn benchmark_instance() -> Instance {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/lrc101.txt");
    match std::fs::read_to_string(path) {
        Ok(text) => parse_lilim(&text).expect("shipped benchmark file parses"),
        // Fall back to a synthetic instance when the data files are absent.
        Err(_) => generate_synthetic(50, 0.3, 1),
    }
}

fn candidate_batch(ctx: &PlanContext, n: usize, seed: u64) -> Vec<Chromosome> {
    let cfg = GaConfig {
        population_size: n,
        ..GaConfig::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    init_population(ctx, &cfg, &mut rng)
        .expect("feasible individuals exist")
        .into_iter()
        .map(|e| e.chromosome)
        .collect()
}

fn bench_evaluation(c: &mut Criterion) {
    let inst = benchmark_instance();
    let weights = weights_for(&inst, 0.5, 0.5).unwrap();
    let ctx = PlanContext::static_plan(&inst, weights);
    let batch = candidate_batch(&ctx, 200, 7);

    let mut group = c.benchmark_group("evaluate_candidates");
    group.bench_with_input(BenchmarkId::new("parallel", batch.len()), &batch, |b, batch| {
        b.iter(|| black_box(evaluate_candidates(&ctx, batch.clone())));
    });
    group.bench_with_input(BenchmarkId::new("sequential", batch.len()), &batch, |b, batch| {
        b.iter(|| black_box(evaluate_candidates_seq(&ctx, batch.clone())));
    });
    group.finish();
}

fn bench_oracle(c: &mut Criterion) {
    let inst = generate_synthetic(5, 0.5, 11);

    let mut group = c.benchmark_group("exact_front");
    group.sample_size(20);
    group.bench_function("parallel", |b| {
        b.iter(|| black_box(oracle::exact_front(&inst).unwrap()));
    });
    group.bench_function("sequential", |b| {
        b.iter(|| black_box(oracle::front_over_assignments_seq(&inst)));
    });
    group.finish();
}

criterion_group!(benches, bench_evaluation, bench_oracle);
criterion_main!(benches);
