use aqg_core::oracle::{sample_field, FieldSampler, Normalization};
use aqg_core::spectral::{advection_term, riesz_velocity, Grid};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

fn transforms(c: &mut Criterion) {
    let mut group = c.benchmark_group("spectral");
    for n in [64usize, 128, 256] {
        let grid = Grid::square(n).unwrap();
        let sampler = FieldSampler::new(grid, n / 8, 1, Normalization::UnitH2).unwrap();
        let theta = sample_field(&sampler);
        let phys = theta.to_physical();
        group.bench_with_input(BenchmarkId::new("forward", n), &phys, |b, f| {
            b.iter(|| black_box(f.to_spectral()))
        });
        group.bench_with_input(BenchmarkId::new("inverse", n), &theta, |b, f| {
            b.iter(|| black_box(f.to_physical()))
        });
        group.bench_with_input(BenchmarkId::new("riesz", n), &theta, |b, f| {
            b.iter(|| black_box(riesz_velocity(f)))
        });
        group.bench_with_input(BenchmarkId::new("advection", n), &theta, |b, f| {
            b.iter(|| black_box(advection_term(f)))
        });
    }
    group.finish();
}

criterion_group!(benches, transforms);
criterion_main!(benches);
