use criterion::{black_box, criterion_group, criterion_main, Criterion};

use ablation_heat::fd_oracle::{self, Grid, Recording, Scheme};
use ablation_heat::finite_spectral::{eigenvalues, SeriesControl, ShellSeries};
use ablation_heat::infinite_hyperbolic;
use ablation_heat::specfun::{self, Sign};
use ablation_heat::{derive_params, Equation, PhysicalParams, QuadratureControl};

fn special_functions(c: &mut Criterion) {
    let q = QuadratureControl::default();
    c.bench_function("dawson", |b| b.iter(|| specfun::dawson(black_box(0.924))));
    c.bench_function("s1", |b| b.iter(|| specfun::s1(black_box(2.0), black_box(3.0), &q).unwrap()));
    c.bench_function("j2_plus", |b| b.iter(|| specfun::j2(Sign::Plus, black_box(2.0), black_box(1.0), &q).unwrap()));
    c.bench_function("s2", |b| b.iter(|| specfun::s2(black_box(2.0), black_box(1.0), &q).unwrap()));
}

fn closed_forms(c: &mut Criterion) {
    let p = PhysicalParams::default().unbounded();
    let dp = derive_params(&p).unwrap();
    let q = QuadratureControl::default();
    c.bench_function("hyperbolic_infinite_point", |b| {
        b.iter(|| infinite_hyperbolic::transient(black_box(1.0), 2.0 * p.r0, &dp, &p, &q).unwrap())
    });
}

fn shell_series(c: &mut Criterion) {
    let p = PhysicalParams::default();
    let dp = derive_params(&p).unwrap();
    c.bench_function("eigenvalues_400", |b| b.iter(|| eigenvalues(black_box(&p), 400).unwrap()));
    c.bench_function("series_setup_400", |b| {
        b.iter(|| ShellSeries::new(&p, &dp, Equation::Hyperbolic, &SeriesControl::default()).unwrap())
    });
    let s = ShellSeries::new(&p, &dp, Equation::Hyperbolic, &SeriesControl::default()).unwrap();
    c.bench_function("series_point_400", |b| b.iter(|| s.temperature(black_box(100.0), 0.01).unwrap()));
}

fn finite_differences(c: &mut Criterion) {
    let p = PhysicalParams::default();
    let dp = derive_params(&p).unwrap();
    let mut group = c.benchmark_group("fd");
    group.sample_size(10);
    for scheme in [Scheme::ExplicitParabolic, Scheme::ExplicitHyperbolic] {
        let g = Grid::new(&p, &dp, scheme, 491, 100.0, 0.95, Some(100.0)).unwrap();
        let rec = Recording::at_times(&g, &[100.0], 10).unwrap();
        group.bench_function(format!("{scheme:?}_491_to_100s"), |b| b.iter(|| fd_oracle::solve(&p, &dp, &g, &rec).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, special_functions, closed_forms, shell_series, finite_differences);
criterion_main!(benches);
