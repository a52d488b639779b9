use std::hint::black_box;
use std::sync::Arc;

use cring::batch::{self, Strategy};
use cring::{sample, AlgebraContext, Truncated, WittRing};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const STRATEGIES: [(&str, Strategy); 2] = [
    ("sequential", Strategy::Sequential),
    ("parallel", Strategy::Parallel),
];

fn reduce_batch(c: &mut Criterion) {
    let ctx = Arc::new(AlgebraContext::parse_spec("gf(16)").unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let xs: Vec<_> = (0..256)
        .map(|_| sample::monoid_element(&ctx, &mut rng, 8, 50))
        .collect();
    let mut group = c.benchmark_group("reduce_256_gf16_n4");
    for (name, strategy) in STRATEGIES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &strategy, |b, &s| {
            b.iter(|| batch::reduce_all(s, black_box(&xs), 4))
        });
    }
    group.finish();
}

fn alpha_batch(c: &mut Criterion) {
    let ctx = Arc::new(AlgebraContext::parse_spec("gf(9)").unwrap());
    let ring = WittRing::new(&ctx, 3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let pairs: Vec<_> = (0..64)
        .map(|_| {
            let x = Truncated::reduce(&sample::monoid_element(&ctx, &mut rng, 4, 20), 3);
            let y = Truncated::reduce(&sample::monoid_element(&ctx, &mut rng, 4, 20), 3);
            (x, y)
        })
        .collect();
    let mut group = c.benchmark_group("alpha_homomorphism_64_gf9_n3");
    group.sample_size(20);
    for (name, strategy) in STRATEGIES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &strategy, |b, &s| {
            b.iter(|| batch::alpha_mismatches(s, &ring, black_box(&pairs)).unwrap())
        });
    }
    group.finish();
}

fn selftest(c: &mut Criterion) {
    let mut group = c.benchmark_group("selftest");
    group.sample_size(10);
    for (name, strategy) in STRATEGIES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &strategy, |b, &s| {
            b.iter(|| cring::selftest::run(s))
        });
    }
    group.finish();
}

criterion_group!(benches, reduce_batch, alpha_batch, selftest);
criterion_main!(benches);
