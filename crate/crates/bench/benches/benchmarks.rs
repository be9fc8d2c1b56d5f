use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use complexity_core::*;

fn random_machine(n: usize, beta: f64, seed: u64) -> BoltzmannMachine {
    let shape = SystemShape::new(n).unwrap();
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let w: Vec<f64> = (0..n * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    BoltzmannMachine::new(WeightMatrix::new(shape, w).unwrap(), beta).unwrap()
}

fn bench_kernel_build(c: &mut Criterion) {
    let mut group = c.benchmark_group("transition_matrix");
    for n in [5usize, 9] {
        let machine = random_machine(n, 1.0, 7);
        group.bench_with_input(BenchmarkId::from_parameter(n), &machine, |b, m| {
            b.iter(|| m.transition_matrix())
        });
    }
    group.finish();
}

fn bench_stationary(c: &mut Criterion) {
    let mut group = c.benchmark_group("stationary_distribution");
    group.sample_size(20);
    for n in [5usize, 9] {
        let kernel = random_machine(n, 1.0, 11).transition_matrix();
        group.bench_with_input(BenchmarkId::from_parameter(n), &kernel, |b, k| {
            b.iter(|| stationary_distribution(k, 1e-13, 1_000_000).unwrap())
        });
    }
    group.finish();
}

fn bench_measures(c: &mut Criterion) {
    let kernel = random_machine(9, 1.0, 13).transition_matrix();
    let p = stationary_distribution(&kernel, 1e-13, 1_000_000).unwrap();
    c.bench_function("all_measures_n9", |b| {
        b.iter(|| MeasureReport::compute(&p, &kernel, None))
    });
}

fn bench_projection(c: &mut Criterion) {
    let mut group = c.benchmark_group("phi_projection");
    group.sample_size(20);
    for beta in [0.5, 2.0] {
        let kernel = random_machine(5, beta, 17).transition_matrix();
        let p = stationary_distribution(&kernel, 1e-13, 1_000_000).unwrap();
        group.bench_with_input(
            BenchmarkId::from_parameter(beta),
            &(p, kernel),
            |b, (p, k)| b.iter(|| phi_g(p, k, 1e-9, 100_000).unwrap()),
        );
    }
    group.finish();
}

fn bench_capacity(c: &mut Criterion) {
    let shape = SystemShape::new(9).unwrap();
    let mut rng = ChaCha12Rng::seed_from_u64(19);
    let patterns = PatternSet::random(shape, 10, &mut rng);
    let mut weights = patterns.hebb_weights().unwrap();
    weights.zero_diagonal();
    let map = weights.deterministic_map();
    let kernel = map.to_stoch_matrix();
    let vertices = map.attractors().stationary_vertices();
    let mut group = c.benchmark_group("complexity_capacity");
    group.sample_size(10);
    group.bench_function("n9_t10", |b| {
        b.iter(|| complexity_capacity(&kernel, &vertices, 1e-4, 5_000_000).unwrap())
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_kernel_build,
    bench_stationary,
    bench_measures,
    bench_projection,
    bench_capacity
);
criterion_main!(benches);
