use criterion::{criterion_group, criterion_main, Criterion};
use hannay_vdp::dual::{alphabeta_rhs, AlphaBeta};
use hannay_vdp::geophase::{worker_pool, FrozenSource, PhaseConvention, SweepContext};
use hannay_vdp::hannay::{green_theorem_vdp, hannay_angle_vdp};
use hannay_vdp::limit_cycle::measure;
use hannay_vdp::ode::{integrate, IntegratorConfig};
use hannay_vdp::series::{limit_cycle_frequency, SeriesOrder};
use hannay_vdp_bench::{ellipse, reference_params, square};
use std::hint::black_box;

fn series(c: &mut Criterion) {
    let p = reference_params();
    c.bench_function("series_frequency", |b| b.iter(|| limit_cycle_frequency(black_box(&p), SeriesOrder::MAX)));
    let s = AlphaBeta { alpha1: 1.0, alpha2: 0.8, beta1: 0.3, beta2: -0.2 };
    c.bench_function("amplitude_flow_rhs", |b| b.iter(|| alphabeta_rhs(black_box(&s), &p).unwrap()));
}

fn ode(c: &mut Criterion) {
    let p = reference_params();
    let cfg = IntegratorConfig::with_tol(1e-11);
    c.bench_function("vdp_10_periods", |b| {
        b.iter(|| {
            integrate(
                |_, y, dy| {
                    dy[0] = y[1];
                    dy[1] = -p.omega * p.omega * y[0] + p.eps * (1.0 - y[0] * y[0]) * y[1];
                },
                black_box(&[2.0, 0.0]),
                0.0,
                20.0 * std::f64::consts::PI,
                &cfg,
            )
            .unwrap()
        })
    });
    c.bench_function("measure_limit_cycle", |b| b.iter(|| measure(black_box(&p), 128).unwrap()));
}

fn loops(c: &mut Criterion) {
    let (sq, el) = (square(), ellipse());
    c.bench_function("line_quadrature_square", |b| b.iter(|| hannay_angle_vdp(black_box(&sq)).unwrap()));
    c.bench_function("line_quadrature_ellipse", |b| b.iter(|| hannay_angle_vdp(black_box(&el)).unwrap()));
    c.bench_function("area_integral_ellipse", |b| b.iter(|| green_theorem_vdp(black_box(&el)).unwrap()));
}

fn sweep(c: &mut Criterion) {
    let pool = worker_pool().unwrap();
    let lp = square();
    let ctx = SweepContext::with_pool(&lp, FrozenSource::Family { nodes: 9, n_theta: 64 }, &pool).unwrap();
    let t = ctx.duration_for_cycles(100.0);
    let cfg = IntegratorConfig::with_tol(1e-10);
    let mut g = c.benchmark_group("sweep");
    g.sample_size(10);
    g.bench_function("square_100_cycles", |b| b.iter(|| ctx.sweep(black_box(t), &cfg, PhaseConvention::Polar).unwrap()));
    g.finish();
}

criterion_group!(benches, series, ode, loops, sweep);
criterion_main!(benches);
