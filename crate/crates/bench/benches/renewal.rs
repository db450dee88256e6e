use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use mginf::{bound_curve, cycle_moments, estimate_curve, renewal_curve, BoundClass, Method, Tolerance};
use mginf_bench::{closed_form_models, grid, quadrature_models};

fn curves(c: &mut Criterion) {
    let g = grid(10.0, 0.1);
    let tol = Tolerance::default();
    let mut group = c.benchmark_group("renewal_curve");
    for (name, m) in closed_form_models() {
        group.bench_with_input(BenchmarkId::new("closed", name), &m, |b, m| {
            b.iter(|| renewal_curve(m, black_box(&g), Method::Closed, tol).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("quadrature", name), &m, |b, m| {
            b.iter(|| renewal_curve(m, black_box(&g), Method::Quadrature, tol).unwrap())
        });
    }
    for (name, m) in quadrature_models() {
        group.bench_with_input(BenchmarkId::new("quadrature", name), &m, |b, m| {
            b.iter(|| renewal_curve(m, black_box(&g), Method::Quadrature, tol).unwrap())
        });
    }
    group.finish();
}

fn moments_and_bounds(c: &mut Criterion) {
    let tol = Tolerance::default();
    for (name, m) in closed_form_models().into_iter().chain(quadrature_models()) {
        c.bench_function(&format!("cycle_moments/{name}"), |b| b.iter(|| cycle_moments(black_box(&m), tol).unwrap()));
    }
    let g = grid(5.0, 0.1);
    let imrl = BoundClass::Imrl { alpha: 1.0, mu2: 2.5, mu3: 10.5 };
    c.bench_function("bound_curve/imrl", |b| b.iter(|| bound_curve(1.0, imrl, black_box(&g), tol).unwrap()));
}

fn simulation(c: &mut Criterion) {
    let g = grid(10.0, 1.0);
    let mut group = c.benchmark_group("estimate_curve");
    group.sample_size(10);
    for (name, m) in closed_form_models() {
        group.bench_with_input(BenchmarkId::new("reps_10000", name), &m, |b, m| {
            b.iter(|| estimate_curve(m, black_box(&g), 10_000, 42).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, curves, moments_and_bounds, simulation);
criterion_main!(benches);
