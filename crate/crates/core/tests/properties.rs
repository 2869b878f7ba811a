use std::time::{Duration, Instant};

use gfweno::cases::{all_cases, CaseModel};
use gfweno::global_flux::build_global_flux;
use gfweno::steady::exact;
use gfweno::study::{
    convergence_study, format_real, run_case, write_convergence_csv, RunOptions,
};
use gfweno::{
    multistep_weights, BalanceLaw, BranchPlan, BurgersModel, Family, FluxBranch, Geometry, Grid,
    QuadraturePlan, SeedSource, SingularityRegistry, SteadyProblem, Weno, WenoOrder,
};
use proptest::prelude::*;

fn orders() -> impl Strategy<Value = WenoOrder> {
    prop::sample::select(vec![WenoOrder::THREE, WenoOrder::FIVE, WenoOrder::SEVEN])
}

fn families() -> impl Strategy<Value = Family> {
    prop::sample::select(vec![Family::AdamsBashforth, Family::AdamsMoulton])
}

proptest! {
    #[test]
    fn reconstruction_is_linear_once_weights_are_frozen(
        order in orders(),
        a in prop::collection::vec(-5.0f64..5.0, 7),
        b in prop::collection::vec(-5.0f64..5.0, 7),
    ) {
        let weno = Weno::new(order);
        let n = order.stencil_len();
        let (a, b) = (&a[..n], &b[..n]);
        let w = weno.weights(a);
        let diff: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        let lhs = weno.reconstruct_with_weights(&diff, &w);
        let rhs = weno.reconstruct_with_weights(a, &w) - weno.reconstruct_with_weights(b, &w);
        prop_assert!((lhs - rhs).abs() <= 1e-13 * (1.0 + lhs.abs()));
    }

    #[test]
    fn formatted_reals_parse_back_bitwise(v in any::<f64>().prop_filter("finite", |v| v.is_finite())) {
        let back: f64 = format_real(v).parse().unwrap();
        prop_assert_eq!(back.to_bits(), v.to_bits());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn swept_states_have_constant_modified_flux(
        exponent in 1u32..=3,
        slope in 0.1f64..0.5,
        family in families(),
        q in prop::sample::select(vec![4usize, 6, 8]),
        n in 20usize..60,
    ) {
        let geometry = Geometry::linear(slope, 0.0);
        let model = BurgersModel::new(exponent, geometry.clone()).unwrap();
        let constant = match exponent {
            1 => 1.5,
            2 => 1.0,
            _ => -2.0,
        };
        let rule = multistep_weights(family, q).unwrap();
        let s = rule.steps();
        let grid = Grid::new(0.0, 1.0, n).unwrap();
        let problem = SteadyProblem::new(
            &model,
            rule.clone(),
            grid,
            SeedSource::Exact(exact::burgers(exponent, constant, geometry)),
            BranchPlan::Fixed(FluxBranch::ScalarPositive),
        )
        .with_band(s, 0);
        let nodes = gfweno::steady::steady_sweep_extended(&problem, 0.0).unwrap();
        let plan = QuadraturePlan::new(rule, SingularityRegistry::empty());
        let gf = build_global_flux(&model, &plan, &nodes, &grid, 0.0, None).unwrap();
        let values: Vec<f64> = gf.modified.as_slice().iter().map(|f| f[0]).collect();
        let (lo, hi) = values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v)));
        let scale = nodes.as_slice().iter().map(|u| model.flux(u)[0].abs()).fold(1.0, f64::max);
        prop_assert!(hi - lo <= 1e-12 * scale, "spread {}", hi - lo);
    }
}

#[test]
fn convergence_tables_are_deterministic() {
    let render = || {
        let rows = convergence_study("swe-subcritical", "weno5gf-am6", &[25, 50, 100], &RunOptions::default()).unwrap();
        let mut out = Vec::new();
        write_convergence_csv(&mut out, &rows).unwrap();
        String::from_utf8(out).unwrap()
    };
    let first = render();
    assert_eq!(first, render());
    assert!(first.starts_with("n,err_c0,ord_c0,err_c1,ord_c1\n"));
}

#[test]
fn every_case_runs_at_its_smallest_resolution() {
    for spec in all_cases() {
        let n = *spec.n_list.iter().min().unwrap();
        let start = Instant::now();
        let run = run_case(spec.id, spec.default_scheme, n, &RunOptions::default())
            .unwrap_or_else(|e| panic!("{}: {e}", spec.id));
        assert!(start.elapsed() < Duration::from_secs(60), "{} took {:?}", spec.id, start.elapsed());
        assert_eq!(run.state.len(), n + 1);
        let m = match spec.setup {
            CaseModel::Scalar(_) => 1,
            CaseModel::ShallowWater(_) => 2,
        };
        assert!(run.state.iter().flatten().all(|v| v.is_finite()) && run.components() == m);
    }
}
