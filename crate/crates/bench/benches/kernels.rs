use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use glspace_core::profiles::profile_of;
use glspace_core::spectral::DensityPreset;
use glspace_core::{
    boyd_indices, cgls_norm, fundamental_function, hilbert_transform, hl_maximal, BaseSpace, OuterNorm,
    SampledFunction, SpectralMeasure,
};

fn example_norm() -> OuterNorm {
    OuterNorm::igls(1.0, SpectralMeasure::preset(DensityPreset::InverseSquare, 2.0, 4.0).unwrap()).unwrap()
}

fn quadrature(c: &mut Criterion) {
    let outer = example_norm();
    c.bench_function("fundamental_function/density", |b| {
        b.iter(|| fundamental_function(black_box(&outer), black_box(1e4)).unwrap())
    });

    let half = BaseSpace::half_line(10.0, 10_001).unwrap();
    let f = SampledFunction::from_fn(half, |t| (-t).exp() + (t < 1.0) as u8 as f64).unwrap();
    let h = profile_of(&f, outer.profile_domain());
    c.bench_function("cgls_norm/sampled", |b| b.iter(|| cgls_norm(black_box(&h), black_box(&outer)).unwrap()));

    let s_grid: Vec<f64> = (-8..=8).map(|k| 10f64.powi(k)).collect();
    c.bench_function("boyd_indices/density", |b| {
        b.iter(|| boyd_indices(black_box(&outer), black_box(&s_grid)).unwrap())
    });
}

fn operators(c: &mut Criterion) {
    let mut group = c.benchmark_group("operators");
    for n in [1usize << 10, 1 << 14] {
        let line = BaseSpace::real_line(50.0, n).unwrap();
        let f = SampledFunction::from_fn(line, |t| (1.0 - t.abs()).max(0.0)).unwrap();
        group.bench_with_input(BenchmarkId::new("hilbert", n), &f, |b, f| {
            b.iter(|| hilbert_transform(black_box(f)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("maximal", n), &f, |b, f| {
            b.iter(|| hl_maximal(black_box(f)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, quadrature, operators);
criterion_main!(benches);
