use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use radgrp::cases;
use radgrp::grp::{solve_grp, SlopedState};
use radgrp::mesh1d::{self, StepControl};
use radgrp::riemann::solve_star;
use radgrp::solver2d::{self, SplitOrder};
use radgrp::sweep::Scheme;
use radgrp::GasModel;

fn riemann(c: &mut Criterion) {
    let mut g = c.benchmark_group("riemann");
    for a in [0.0, 1.0] {
        let m = GasModel::new(5.0 / 3.0, a).unwrap();
        let l = m.prim_from_rho_u_temp(1.0, 50.0, 0.5).unwrap();
        let r = m.prim_from_rho_u_temp(2.0, -40.0, 1.0).unwrap();
        g.bench_with_input(BenchmarkId::new("two_shocks", a), &a, |b, _| b.iter(|| solve_star(&m, black_box(&l), black_box(&r)).unwrap()));
        let l = m.prim_from_rho_u_temp(1.0, -1.0, 1.0).unwrap();
        let r = m.prim_from_rho_u_temp(1.0, 1.0, 1.0).unwrap();
        g.bench_with_input(BenchmarkId::new("two_rarefactions", a), &a, |b, _| b.iter(|| solve_star(&m, black_box(&l), black_box(&r)).unwrap()));
    }
    g.finish();
}

fn grp(c: &mut Criterion) {
    let mut g = c.benchmark_group("grp");
    let m = GasModel::new(5.0 / 3.0, 1.0).unwrap();
    let l = SlopedState::new(m.prim_from_rho_u_temp(1.0, -1.0, 1.0).unwrap(), 0.3, -0.2, 0.5);
    let r = SlopedState::new(m.prim_from_rho_u_temp(0.8, 1.0, 1.2).unwrap(), -0.1, 0.4, 0.2);
    g.bench_function("rarefactions", |b| b.iter(|| solve_grp(&m, black_box(&l), black_box(&r)).unwrap()));
    let l = SlopedState::new(m.prim_from_rho_u_temp(1.0, 50.0, 0.5).unwrap(), 0.3, -0.2, 0.5);
    let r = SlopedState::new(m.prim_from_rho_u_temp(2.0, -40.0, 1.0).unwrap(), -0.1, 0.4, 0.2);
    g.bench_function("shocks", |b| b.iter(|| solve_grp(&m, black_box(&l), black_box(&r)).unwrap()));
    let w = m.prim_from_rho_u_temp(1.0, 0.2, 1.0).unwrap();
    let (l, r) = (SlopedState::new(w, 0.1, 0.0, 0.1), SlopedState::new(w, -0.1, 0.2, 0.0));
    g.bench_function("smooth", |b| b.iter(|| solve_grp(&m, black_box(&l), black_box(&r)).unwrap()));
    g.finish();
}

fn sweeps(c: &mut Criterion) {
    let mut g = c.benchmark_group("step");
    g.sample_size(20);
    let case = cases::find("sine1d").unwrap();
    let m = case.model().unwrap();
    for scheme in [Scheme::Grp, Scheme::MusclHancock] {
        let mut grid = case.grid_1d(&m, 320).unwrap();
        grid.initialize_slopes(&m, case.theta).unwrap();
        let dt = mesh1d::compute_dt(&grid, &m, &StepControl::default()).unwrap();
        g.bench_function(BenchmarkId::new("line_320", scheme.name()), |b| {
            b.iter_batched_ref(|| grid.clone(), |gr| mesh1d::step(gr, &m, scheme, case.theta, dt).unwrap(), criterion::BatchSize::SmallInput)
        });
    }
    let case = cases::find("sine2d").unwrap();
    let m = case.model().unwrap();
    let mut grid = case.grid_2d(&m, (64, 64)).unwrap();
    grid.initialize_slopes(&m, case.theta).unwrap();
    let dt = solver2d::compute_dt(&grid, &m, &StepControl::default()).unwrap();
    g.bench_function("plane_64x64_grp", |b| {
        b.iter_batched_ref(|| grid.clone(), |gr| solver2d::strang_step(gr, &m, Scheme::Grp, case.theta, dt, SplitOrder::Xyx).unwrap(), criterion::BatchSize::SmallInput)
    });
    g.finish();
}

criterion_group!(benches, riemann, grp, sweeps);
criterion_main!(benches);
