//! Parallel vs sequential timing for the batch-evaluation kernels.
//!
//! Build with the default `parallel` feature to compare rayon against the
//! sequential twins; without the feature both sides run sequentially.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use socf::analysis::{contour_grid, contour_grid_seq};
use socf::oracle::{concavity_probe, concavity_probe_seq, grid_max, grid_max_seq, ProbeConfig};
use socf::{CanonicalForm, Matrix, TolerancePolicy, Vector};

fn showcase(cs: f64, delta: f64) -> CanonicalForm {
    CanonicalForm::new(
        Vector::from_slice(&[cs, cs]).unwrap(),
        0.0,
        delta,
        Matrix::from_rows([[2.0, -1.0], [-1.0, 5.0]]).unwrap(),
        Vector::from_slice(&[0.0, 0.0]).unwrap(),
        &TolerancePolicy::default(),
    )
    .unwrap()
}

fn bench_contour(c: &mut Criterion) {
    let g = showcase(0.7, 1.0);
    let mut group = c.benchmark_group("contour_grid");
    for &n in &[129usize, 513] {
        group.bench_with_input(BenchmarkId::new("parallel", n), &n, |b, &n| {
            b.iter(|| contour_grid(&g, (-2.0, 2.0), (-2.0, 2.0), n, n).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("sequential", n), &n, |b, &n| {
            b.iter(|| contour_grid_seq(&g, (-2.0, 2.0), (-2.0, 2.0), n, n).unwrap())
        });
    }
    group.finish();
}

fn bench_grid_max(c: &mut Criterion) {
    let g = showcase(0.7, 1.0);
    let bounds = [(-2.0, 2.0), (-2.0, 2.0)];
    let mut group = c.benchmark_group("grid_max");
    group.bench_function("parallel", |b| {
        b.iter(|| grid_max(&g, &bounds, 101, 5).unwrap())
    });
    group.bench_function("sequential", |b| {
        b.iter(|| grid_max_seq(&g, &bounds, 101, 5).unwrap())
    });
    group.finish();
}

fn bench_concavity_probe(c: &mut Criterion) {
    let g = showcase(1.3, 1.0);
    let cfg = ProbeConfig {
        n_segments: 4096,
        ..ProbeConfig::with_seed(17)
    };
    let mut group = c.benchmark_group("concavity_probe");
    group.bench_function("parallel", |b| b.iter(|| concavity_probe(&g, &cfg)));
    group.bench_function("sequential", |b| b.iter(|| concavity_probe_seq(&g, &cfg)));
    group.finish();
}

criterion_group!(
    benches,
    bench_contour,
    bench_grid_max,
    bench_concavity_probe
);
criterion_main!(benches);
