use std::f64::consts::PI;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gfweno::steady::exact;
use gfweno::{
    multistep_weights, BoundaryPolicy, BranchPlan, BurgersModel, Family, FluxBranch, Geometry,
    Grid, SchemeConfig, SchemeKind, SeedSource, ShallowWaterModel, Solver, State, SteadyProblem,
    Weno, WenoOrder,
};

const ORDERS: [WenoOrder; 3] = [WenoOrder::THREE, WenoOrder::FIVE, WenoOrder::SEVEN];

fn reconstruction(c: &mut Criterion) {
    let mut group = c.benchmark_group("weno_reconstruct");
    let data: Vec<f64> = (0..7).map(|i| (0.7 * i as f64).sin()).collect();
    for order in ORDERS {
        let weno = Weno::new(order);
        let stencil = &data[..order.stencil_len()];
        group.bench_with_input(BenchmarkId::from_parameter(order.p()), stencil, |b, s| {
            b.iter(|| weno.reconstruct_left(black_box(s)))
        });
    }
    group.finish();
}

fn shallow_water_rhs(c: &mut Criterion) {
    let geometry = Geometry::stationary(
        |x| 1.0 + 0.2 * (2.0 * PI * x).sin(),
        |x| 0.4 * PI * (2.0 * PI * x).cos(),
    );
    let model = ShallowWaterModel::frictionless(geometry);
    let mut group = c.benchmark_group("swe_rhs_gf");
    for n in [100usize, 400] {
        let grid = Grid::new(0.0, 1.0, n).unwrap();
        let state = State::from_fn(grid, |x| {
            [1.2 + 0.1 * (2.0 * PI * x).cos(), 0.5 + 0.2 * (4.0 * PI * x).sin()]
        });
        for order in ORDERS {
            let rule = multistep_weights(Family::AdamsMoulton, order.p() + 1).unwrap();
            let config = SchemeConfig::new(order, SchemeKind::GlobalFlux(rule), BoundaryPolicy::periodic());
            let solver = Solver::new(&model, grid, config).unwrap();
            group.bench_function(BenchmarkId::new(format!("weno{}", order.p()), n), |b| {
                b.iter(|| solver.rhs(black_box(&state), 0.0).unwrap())
            });
        }
    }
    group.finish();
}

fn steady_sweep(c: &mut Criterion) {
    let geometry = Geometry::linear(1.0, 0.0);
    let model = BurgersModel::new(2, geometry.clone()).unwrap();
    let mut group = c.benchmark_group("burgers_steady_sweep");
    for (family, q) in [(Family::AdamsBashforth, 8), (Family::AdamsMoulton, 8)] {
        let rule = multistep_weights(family, q).unwrap();
        let s = rule.steps();
        let grid = Grid::new(-1.0, 1.0, 320).unwrap();
        let problem = SteadyProblem::new(
            &model,
            rule.clone(),
            grid,
            SeedSource::Exact(exact::burgers(2, 1.0, geometry.clone())),
            BranchPlan::Fixed(FluxBranch::ScalarPositive),
        )
        .with_band(s, 0);
        group.bench_function(rule.to_string(), |b| {
            b.iter(|| gfweno::steady_sweep_extended(black_box(&problem), 0.0).unwrap())
        });
    }
    group.finish();
}

criterion_group!(kernels, reconstruction, shallow_water_rhs, steady_sweep);
criterion_main!(kernels);
