use criterion::{black_box, criterion_group, criterion_main, Criterion};
use hypflow_core::circle_model::TrigPolynomial;
use hypflow_core::flat_trace::{trace_atoms, LengthSpectrum, WeightConvention};
use hypflow_core::harmonic_transform::{forward, gaussian_bump, uniform_r_grid, GroupFunction, SliceFn};
use hypflow_core::matrix_elements::{jacobi_b_block, jacobi_b_quad, jacobi_b_series};
use hypflow_core::resonances::{branch_coefficients, resolvent_correlation, spectral_b_depth, Branch, ResolventMethod};
use hypflow_core::{Complex64, TruncationParams};
use std::sync::Arc;

fn l0() -> Complex64 {
    Complex64::new(-0.5, 1.0)
}

fn matrix_elements(c: &mut Criterion) {
    let p = TruncationParams::default();
    let mut g = c.benchmark_group("matrix_elements");
    for tau in [0.5, 4.0] {
        g.bench_function(format!("quad_tau{tau}"), |b| b.iter(|| jacobi_b_quad(l0(), 3.0, -2.0, black_box(tau), &p)));
        g.bench_function(format!("series_tau{tau}"), |b| b.iter(|| jacobi_b_series(l0(), 3, -2, black_box(tau), &p)));
    }
    g.bench_function("block_k32_tau2", |b| b.iter(|| jacobi_b_block(l0(), black_box(2.0), 32)));
    g.finish();
}

fn resonances(c: &mut Criterion) {
    let p = TruncationParams { resonance_depth: 16, ..Default::default() };
    let mut g = c.benchmark_group("resonances");
    g.bench_function("recurrence_depth32", |b| b.iter(|| branch_coefficients(l0(), 3, -2, Branch::Plus, black_box(32))));
    g.bench_function("spectral_sum_j6", |b| b.iter(|| spectral_b_depth(l0(), 3, -2, black_box(5.0), 6)));
    let f = TrigPolynomial::from_coeffs([(0, Complex64::new(1.0, 0.0)), (1, Complex64::new(0.5, 0.0))]);
    let h = TrigPolynomial::mode(0);
    g.sample_size(10);
    g.bench_function("resolvent_rational", |b| {
        b.iter(|| resolvent_correlation(l0(), &f, &h, black_box(Complex64::new(2.0, 0.0)), ResolventMethod::rational(), &p))
    });
    g.bench_function("resolvent_laplace", |b| {
        b.iter(|| resolvent_correlation(l0(), &f, &h, black_box(Complex64::new(2.0, 0.0)), ResolventMethod::Laplace, &p))
    });
    g.finish();
}

fn flat_trace(c: &mut Criterion) {
    let ls = LengthSpectrum::new((0..1000).map(|i| (0.5 + 0.0137 * i as f64, 1)).collect()).unwrap();
    c.bench_function("trace_atoms_1000x20", |b| b.iter(|| trace_atoms(black_box(&ls), 20, WeightConvention::Theorem1)));
}

fn transform(c: &mut Criterion) {
    let p = TruncationParams::default();
    let f = GroupFunction::from_slices(
        3.0,
        vec![
            (0, 0, Arc::new(|t: f64| Complex64::new(gaussian_bump(t, 0.7, 3.0), 0.0)) as SliceFn),
            (1, 1, Arc::new(|t: f64| Complex64::new(0.5 * gaussian_bump(t, 0.7, 3.0), 0.0))),
        ],
    )
    .unwrap();
    let grid = uniform_r_grid(12.0, 100);
    let mut g = c.benchmark_group("transform");
    g.sample_size(10);
    g.bench_function("forward_band1_r100", |b| b.iter(|| forward(black_box(&f), &grid, &p)));
    g.finish();
}

criterion_group!(benches, matrix_elements, resonances, flat_trace, transform);
criterion_main!(benches);
