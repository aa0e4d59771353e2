//! Throughput of the operator-identity sweep, Gram assembly, and grid
//! sampling, comparing the single-thread pool against the default pool when
//! the `parallel` feature is on.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use dunkl_coulomb::operator::ModelParams;
use dunkl_coulomb::rational::Rational;
use dunkl_coulomb::spectra::{self, QuantumNumbers};
use dunkl_coulomb::verify::{check_so21, TestFamily};
use dunkl_coulomb::wavefunction::{angular_harmonic, gram_angular, WavefunctionBundle};

fn params() -> ModelParams {
    ModelParams::new(
        Rational::new(1, 4),
        Rational::new(3, 4),
        Rational::new(-1, 1),
    )
    .unwrap()
}

fn short_family() -> TestFamily {
    let mut family = TestFamily::default_family(42);
    family.functions.truncate(64);
    family
}

fn so21_sweep(params: &ModelParams, family: &TestFamily) -> bool {
    check_so21(params, family, None).is_pass()
}

fn angular_gram_trace(params: &ModelParams) -> f64 {
    let mut harmonics = Vec::new();
    for two_n in 0..=5u32 {
        for qn in spectra::enumerate_level(two_n) {
            if qn.l() == 0 {
                harmonics.push(angular_harmonic(params, &qn).unwrap());
            }
        }
    }
    let gram = gram_angular(params, &harmonics, None).unwrap();
    (0..gram.len()).map(|i| gram[i][i]).sum()
}

fn grid_sum(bundle: &WavefunctionBundle, side: usize) -> f64 {
    let points: Vec<(f64, f64)> = (0..side * side)
        .map(|k| {
            let i = k / side;
            let j = k % side;
            let x1 = -4.0 + 8.0 * (i as f64 + 0.5) / side as f64;
            let x2 = -4.0 + 8.0 * (j as f64 + 0.5) / side as f64;
            (x1, x2)
        })
        .collect();
    dunkl_coulomb::exec::map_collect(points, |(x1, x2)| {
        bundle.evaluate_normalized(x1, x2).unwrap()
    })
    .iter()
    .sum()
}

#[cfg(feature = "parallel")]
fn bench_workloads(c: &mut Criterion) {
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let p = params();
    let family = short_family();
    let bundle = WavefunctionBundle::build(
        &p,
        &QuantumNumbers::new(2, 2, 0, 0).unwrap(),
    )
    .unwrap();

    let mut group = c.benchmark_group("so21_sweep");
    group.sample_size(10);
    group.bench_function("single_thread", |b| {
        b.iter(|| single.install(|| black_box(so21_sweep(&p, &family))))
    });
    group.bench_function("default_pool", |b| {
        b.iter(|| black_box(so21_sweep(&p, &family)))
    });
    group.finish();

    let mut group = c.benchmark_group("angular_gram");
    group.sample_size(10);
    group.bench_function("single_thread", |b| {
        b.iter(|| single.install(|| black_box(angular_gram_trace(&p))))
    });
    group.bench_function("default_pool", |b| {
        b.iter(|| black_box(angular_gram_trace(&p)))
    });
    group.finish();

    let mut group = c.benchmark_group("grid_sample");
    group.sample_size(10);
    group.bench_function("single_thread", |b| {
        b.iter(|| single.install(|| black_box(grid_sum(&bundle, 96))))
    });
    group.bench_function("default_pool", |b| {
        b.iter(|| black_box(grid_sum(&bundle, 96)))
    });
    group.finish();
}

#[cfg(not(feature = "parallel"))]
fn bench_workloads(c: &mut Criterion) {
    let p = params();
    let family = short_family();
    let bundle = WavefunctionBundle::build(
        &p,
        &QuantumNumbers::new(2, 2, 0, 0).unwrap(),
    )
    .unwrap();

    let mut group = c.benchmark_group("sequential");
    group.sample_size(10);
    group.bench_function("so21_sweep", |b| {
        b.iter(|| black_box(so21_sweep(&p, &family)))
    });
    group.bench_function("angular_gram", |b| {
        b.iter(|| black_box(angular_gram_trace(&p)))
    });
    group.bench_function("grid_sample", |b| {
        b.iter(|| black_box(grid_sum(&bundle, 96)))
    });
    group.finish();
}

criterion_group!(benches, bench_workloads);
criterion_main!(benches);
