//! End-to-end acceptance checks. Runs as a plain binary (`harness = false`) so
//! that every criterion prints its verdict even when an earlier one fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use gfweno::cases::{case, CaseModel, CASE_IDS};
use gfweno::global_flux::{build_global_flux, singular_cell_integral};
use gfweno::study::{
    convergence_study, perturbation_study, run_case, well_balance_check, ConvergenceRow,
    RunOptions,
};
use gfweno::weno::interface_flux;
use gfweno::{
    multistep_weights, BalanceLaw, BoundaryPolicy, BurgersModel, Family, Geometry, Grid,
    NodeField, QuadraturePlan, SchemeConfig, SchemeKind, ShallowWaterModel, SingularityRegistry,
    Solver, State, Weno, WenoOrder,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

/// Outcome of one criterion: every sub-check with its verdict.
#[derive(Default)]
struct Verdict {
    checks: Vec<(bool, String)>,
}

impl Verdict {
    fn check(&mut self, ok: bool, what: impl Into<String>) {
        self.checks.push((ok, what.into()));
    }

    fn passed(&self) -> bool {
        self.checks.iter().all(|(ok, _)| *ok)
    }

    fn summary(&self) -> String {
        let failed: Vec<_> = self.checks.iter().filter(|(ok, _)| !ok).map(|(_, s)| s.as_str()).collect();
        if failed.is_empty() {
            self.checks.iter().map(|(_, s)| s.as_str()).collect::<Vec<_>>().join("; ")
        } else {
            format!("failed: {}", failed.join("; "))
        }
    }
}

type Criterion = fn() -> Result<Verdict, String>;

fn main() -> ExitCode {
    let criteria: [(u32, &str, Criterion); 9] = [
        (1, "Burgers smooth steady state", burgers_smooth),
        (2, "manufactured traveling solution", manufactured),
        (3, "lake at rest", lake_at_rest),
        (4, "subcritical flow over a bump", subcritical),
        (5, "analytic friction steady state", friction),
        (6, "well-balance properties", well_balance),
        (7, "conservation", conservation),
        (8, "singular sources", singular_sources),
        (9, "perturbation fidelity", perturbation),
    ];
    let mut failures = 0;
    for (id, name, run) in criteria {
        let start = Instant::now();
        let (ok, detail) = match run() {
            Ok(v) => (v.passed(), v.summary()),
            Err(e) => (false, format!("error: {e}")),
        };
        failures += usize::from(!ok);
        println!(
            "criterion {id} {} ({name}, {:.1}s): {detail}",
            if ok { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} of 9 criteria passed", 9 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn ladder(case_id: &str, scheme: &str, ns: &[usize]) -> Result<Vec<ConvergenceRow>, String> {
    convergence_study(case_id, scheme, ns, &RunOptions::default()).map_err(|e| e.to_string())
}

/// Largest error over the components of a row.
fn err(row: &ConvergenceRow) -> f64 {
    row.errors.iter().fold(0.0, |a, &b| a.max(b))
}

fn orders(rows: &[ConvergenceRow]) -> Vec<f64> {
    rows.windows(2)
        .map(|w| (err(&w[0]) / err(&w[1])).ln() / (w[1].n as f64 / w[0].n as f64).ln())
        .collect()
}

fn overall_order(rows: &[ConvergenceRow]) -> f64 {
    let (a, b) = (rows.first().unwrap(), rows.last().unwrap());
    (err(a) / err(b)).ln() / (b.n as f64 / a.n as f64).ln()
}

fn fmt_all(values: &[f64], digits: usize) -> String {
    values.iter().map(|v| format!("{v:.digits$e}")).collect::<Vec<_>>().join(" ")
}

fn fmt_orders(values: &[f64]) -> String {
    values.iter().map(|v| format!("{v:.2}")).collect::<Vec<_>>().join(" ")
}

fn burgers_smooth() -> Result<Verdict, String> {
    const CASE: &str = "burgers-smooth-steady";
    let ns = [20, 40, 80, 160, 320];
    let published = [1.112e-4, 7.865e-6, 5.000e-7, 3.152e-8, 1.979e-9];
    let mut v = Verdict::default();

    let am4 = ladder(CASE, "weno3gf-am4", &ns)?;
    let errs: Vec<f64> = am4.iter().map(err).collect();
    let within = errs.iter().zip(published).all(|(e, p)| (0.5..=2.0).contains(&(e / p)));
    v.check(within, format!("weno3gf-am4 errors {} within 2x of published", fmt_all(&errs, 3)));
    let o = orders(&am4);
    v.check(o.iter().all(|o| (o - 4.0).abs() <= 0.3), format!("am4 orders {}", fmt_orders(&o)));

    let am6 = ladder(CASE, "weno3gf-am6", &ns)?;
    let last = *orders(&am6).last().unwrap();
    v.check((last - 6.0).abs() <= 0.3, format!("am6 final order {last:.2}"));

    let am8 = ladder(CASE, "weno3gf-am8", &[160])?;
    let e8 = err(&am8[0]);
    v.check(e8 <= 1e-12, format!("am8 N=160 error {e8:.3e}"));

    for p in [5, 7] {
        let rows = ladder(CASE, &format!("weno{p}gf-am4"), &ns)?;
        let worst = rows.iter().zip(&errs).map(|(r, e)| (err(r) / e - 1.0).abs()).fold(0.0, f64::max);
        v.check(worst <= 0.01, format!("p={p} deviates from p=3 by {:.2}%", 100.0 * worst));
    }
    Ok(v)
}

fn manufactured() -> Result<Verdict, String> {
    const CASE: &str = "burgers-mms";
    let ns = [120, 240, 480, 960];
    let mut v = Verdict::default();

    let ab6 = ladder(CASE, "weno5gf-ab6", &ns)?;
    let o = orders(&ab6);
    v.check(o.iter().all(|&o| o >= 5.3), format!("weno5gf-ab6 orders {}", fmt_orders(&o)));
    let e = err(ab6.last().unwrap());
    v.check(e <= 4e-8, format!("weno5gf-ab6 N=960 error {e:.3e}"));

    for (p, q) in [(3, 4), (5, 6)] {
        let rows = ladder(CASE, &format!("weno{p}gf-am{q}"), &ns)?;
        let o = overall_order(&rows);
        let expected = p.min(q) as f64;
        v.check((o - expected).abs() <= 0.4, format!("weno{p}gf-am{q} overall order {o:.2}"));
    }
    Ok(v)
}

fn lake_at_rest() -> Result<Verdict, String> {
    let mut v = Verdict::default();
    let mut worst = 0.0_f64;
    for q in [4, 6, 8] {
        let rows = ladder("swe-lake-at-rest", &format!("weno3gf-am{q}"), &[25, 50, 100, 200, 400])?;
        worst = rows.iter().map(err).fold(worst, f64::max);
    }
    v.check(worst <= 1e-12, format!("largest L1 change {worst:.2e} over N=25..400, q=4,6,8"));
    Ok(v)
}

fn subcritical() -> Result<Verdict, String> {
    let ns = [25, 50, 100, 200, 400];
    let mut v = Verdict::default();

    let am4 = ladder("swe-subcritical", "weno3gf-am4", &ns)?;
    let e = err(am4.last().unwrap());
    v.check(e <= 1.1e-7, format!("am4 N=400 error {e:.4e} (bound 1.1e-7)"));
    let last = *orders(&am4).last().unwrap();
    v.check((last - 4.0).abs() <= 0.3, format!("am4 final order {last:.2}"));

    let am8 = ladder("swe-subcritical", "weno3gf-am8", &ns)?;
    let last = *orders(&am8).last().unwrap();
    v.check(last >= 7.3, format!("am8 final order {last:.2}"));

    let reversed = ladder("swe-subcritical-reversed", "weno3gf-am4", &ns)?;
    let worst = reversed.iter().zip(&am4).map(|(r, f)| (err(r) / err(f) - 1.0).abs()).fold(0.0, f64::max);
    v.check(worst <= 0.1, format!("reversed flow differs by {:.2}%", 100.0 * worst));
    Ok(v)
}

fn friction() -> Result<Verdict, String> {
    let mut v = Verdict::default();
    let rows = ladder("swe-friction-khq-super", "weno3gf-am8", &[160, 320])?;
    let e = err(&rows[1]);
    v.check(e <= 1e-11, format!("am8 N=320 error {e:.3e}"));
    let o = orders(&rows)[0];
    v.check((o - 8.0).abs() <= 0.4, format!("am8 order {o:.2}"));
    Ok(v)
}

fn gf_schemes(family_tags: &[&str]) -> Vec<String> {
    let mut out = Vec::new();
    for tag in family_tags {
        for q in [4, 6, 8] {
            for p in [3, 5, 7] {
                out.push(format!("weno{p}gf-{tag}{q}"));
            }
        }
    }
    out
}

fn well_balance() -> Result<Verdict, String> {
    let mut v = Verdict::default();

    // (a) + (b): every steady case at its default resolution.
    let mut jobs = Vec::new();
    for &id in CASE_IDS.iter().filter(|&&id| id != "burgers-mms") {
        // Explicit sweeps leave the admissible branch on the oscillatory geometry,
        // so that case is run with the implicit family only.
        let families: &[&str] = if id == "burgers-oscillatory" { &["am"] } else { &["ab", "am"] };
        let n = case(id).map_err(|e| e.to_string())?.default_n;
        jobs.extend(gf_schemes(families).into_iter().map(|s| (id, s, n)));
    }
    let results: Vec<_> = jobs
        .par_iter()
        .map(|(id, s, n)| (id, s, n, well_balance_check(id, s, *n, 100)))
        .collect();
    let (mut residual, mut drift) = (0.0_f64, 0.0_f64);
    let (mut bad_residual, mut bad_drift) = (Vec::new(), Vec::new());
    for (id, s, n, r) in results {
        let r = r.map_err(|e| format!("{id} {s} N={n}: {e}"))?;
        residual = residual.max(r.residual);
        drift = drift.max(r.drift);
        if r.residual > 1e-12 {
            bad_residual.push(format!("{id} {s} N={n} {:.2e}", r.residual));
        }
        if r.drift > 1e-12 {
            bad_drift.push(format!("{id} {s} N={n} {:.2e}", r.drift));
        }
    }
    let runs = jobs.len();
    v.check(
        bad_residual.is_empty(),
        format!("(a) {runs} sweeps, largest residual {residual:.2e} {}", bad_residual.join(", ")),
    );
    v.check(
        bad_drift.is_empty(),
        format!("(b) largest drift after 100 steps {drift:.2e} {}", bad_drift.join(", ")),
    );

    // (c) quadrature exactness on random polynomials.
    let mut rng = StdRng::seed_from_u64(7);
    let mut worst = 0.0_f64;
    for family in [Family::AdamsBashforth, Family::AdamsMoulton] {
        for q in [4, 6, 8] {
            let rule = multistep_weights(family, q).map_err(|e| e.to_string())?;
            let plan = QuadraturePlan::new(rule, SingularityRegistry::empty());
            for _ in 0..50 {
                let coeffs: Vec<f64> = (0..q).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let dx = rng.gen_range(0.01..0.5);
                let j = rng.gen_range(-5..5_isize);
                let (first, weights) = plan.stencil(j).unwrap();
                let terms: Vec<f64> = weights
                    .iter()
                    .enumerate()
                    .map(|(m, w)| w * horner(&coeffs, (first + m as isize) as f64 * dx))
                    .collect();
                let quad = dx * terms.iter().sum::<f64>();
                let exact = antiderivative(&coeffs, (j + 1) as f64 * dx) - antiderivative(&coeffs, j as f64 * dx);
                // Relative to the magnitude of the summands.
                let scale = exact.abs().max(dx * terms.iter().map(|t| t.abs()).sum::<f64>());
                worst = worst.max((quad - exact).abs() / scale);
            }
        }
    }
    v.check(worst <= 1e-12, format!("(c) quadrature relative error {worst:.2e}"));

    // (d) a constant flux field reconstructs to itself.
    let burgers = BurgersModel::new(2, Geometry::flat()).map_err(|e| e.to_string())?;
    let swe = ShallowWaterModel::frictionless(Geometry::flat());
    let mut worst = 0.0_f64;
    for p in [3, 5, 7] {
        let weno = Weno::new(WenoOrder::new(p).unwrap());
        for _ in 0..50 {
            let f = rng.gen_range(-3.0..3.0);
            let states = NodeField::from_vec(-4, (0..10).map(|_| [rng.gen_range(-2.0..2.0)]).collect());
            let fluxes = NodeField::filled(-4, 10, [f]);
            let out = interface_flux(&burgers, &fluxes, &states, &weno, 0).map_err(|e| e.to_string())?;
            worst = worst.max((out[0] - f).abs() / f.abs().max(1.0));

            let f = [rng.gen_range(-3.0..3.0), rng.gen_range(-10.0..10.0)];
            let states = NodeField::from_vec(
                -4,
                (0..10).map(|_| [rng.gen_range(0.5..2.0), rng.gen_range(-8.0..8.0)]).collect(),
            );
            let fluxes = NodeField::filled(-4, 10, f);
            let out = interface_flux(&swe, &fluxes, &states, &weno, 0).map_err(|e| e.to_string())?;
            for c in 0..2 {
                worst = worst.max((out[c] - f[c]).abs() / f[c].abs().max(1.0));
            }
        }
    }
    v.check(worst <= 1e-14, format!("(d) constant flux reproduced to {worst:.2e}"));
    Ok(v)
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

fn antiderivative(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().enumerate().rev().fold(0.0, |acc, (i, c)| acc * x + c / (i + 1) as f64) * x
}

fn conservation() -> Result<Verdict, String> {
    let mut v = Verdict::default();
    let geometry = Geometry::stationary(
        |x| 1.0 + 0.2 * (2.0 * PI * x).sin(),
        |x| 0.4 * PI * (2.0 * PI * x).cos(),
    );
    let model = ShallowWaterModel::frictionless(geometry);
    let grid = Grid::new(0.0, 1.0, 64).map_err(|e| e.to_string())?;
    let n = grid.n_intervals();
    for (p, family, q) in [(3, Family::AdamsMoulton, 4), (5, Family::AdamsBashforth, 6), (7, Family::AdamsMoulton, 8)] {
        let rule = multistep_weights(family, q).map_err(|e| e.to_string())?;
        let label = format!("weno{p}gf-{rule}");
        let config = SchemeConfig::new(WenoOrder::new(p).unwrap(), SchemeKind::GlobalFlux(rule), BoundaryPolicy::periodic());
        let solver = Solver::new(&model, grid, config).map_err(|e| e.to_string())?;
        let mut state = State::from_fn(grid, |x| {
            [1.2 + 0.1 * (2.0 * PI * x).cos(), 0.5 + 0.2 * (4.0 * PI * x).sin()]
        });
        let mass = |s: &State<2>| s.values()[..n].iter().map(|u| u[0]).sum::<f64>();
        let initial = mass(&state);

        let ext = solver.extend(&state, 0.0).map_err(|e| e.to_string())?;
        let gf = build_global_flux(&model, solver.plan().unwrap(), &ext, &grid, 0.0, solver.bathymetry())
            .map_err(|e| e.to_string())?;
        let zero = gf.primitives.as_slice().iter().all(|r| r[0].to_bits() == 0);
        v.check(zero, format!("{label} mass primitive bitwise zero"));

        let mut t = 0.0;
        for step in 0..1000 {
            let dt = solver.cfl_dt(&state).map_err(|e| e.to_string())?;
            state = solver.ssp_rk3_step(&state, t, dt, step).map_err(|e| e.to_string())?;
            t += dt;
        }
        let drift = ((mass(&state) - initial) / initial).abs();
        v.check(drift <= 1e-12, format!("{label} relative mass drift {drift:.2e} after 1000 steps"));
    }
    Ok(v)
}

fn singular_sources() -> Result<Verdict, String> {
    let mut v = Verdict::default();
    let mut rng = StdRng::seed_from_u64(11);

    let mut worst = 0.0_f64;
    for p in [1, 2, 3] {
        let model = BurgersModel::new(p, Geometry::flat()).map_err(|e| e.to_string())?;
        for _ in 0..40 {
            let ul = [rng.gen_range(0.5..2.0)];
            let (hl, hr) = (rng.gen_range(-0.3..0.3), rng.gen_range(-0.3..0.3));
            worst = worst.max(jump_mismatch(&model, ul, hl, hr)?);
        }
    }
    let swe = ShallowWaterModel::frictionless(Geometry::flat());
    for _ in 0..40 {
        // Subcritical and supercritical states with small bottom steps.
        let h = rng.gen_range(0.8..2.0);
        let fr: f64 = if rng.gen_bool(0.5) { rng.gen_range(0.1..0.5) } else { rng.gen_range(2.0..3.0) };
        let ul = [h, fr * h * (9.81 * h).sqrt()];
        let hl = rng.gen_range(1.0..1.2);
        let hr = hl + rng.gen_range(-0.05..0.05);
        worst = worst.max(jump_mismatch(&swe, ul, hl, hr)?);
    }
    v.check(worst <= 1e-12, format!("[[F]] - S~[[H]] at most {worst:.2e}"));

    const CASE: &str = "burgers-two-discontinuities";
    let spec = case(CASE).map_err(|e| e.to_string())?;
    let CaseModel::Scalar(setup) = &spec.setup else {
        return Err(format!("{CASE} is not a scalar case"));
    };
    let grid = Grid::new(setup.domain.0, setup.domain.1, spec.default_n).map_err(|e| e.to_string())?;
    let registry = SingularityRegistry::locate(&grid, setup.model.geometry());
    let offsets: Vec<f64> = registry
        .interfaces()
        .iter()
        .map(|e| (e.position - grid.x_start()) / grid.dx() - e.index as f64)
        .collect();
    let on_node = offsets.iter().any(|o| o.abs() < 1e-9);
    let between = offsets.iter().any(|o| (o - 0.5).abs() < 1e-9);
    v.check(
        registry.interfaces().len() == 2 && on_node && between,
        format!("N={} jumps at cell offsets {offsets:?}", spec.default_n),
    );

    let worst = gf_schemes(&["ab", "am"])
        .par_iter()
        .map(|s| well_balance_check(CASE, s, spec.default_n, 0).map(|c| c.residual))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?
        .into_iter()
        .fold(0.0, f64::max);
    v.check(worst <= 1e-12, format!("two-jump steady residual {worst:.2e} over 18 schemes"));
    Ok(v)
}

fn jump_mismatch<L: BalanceLaw<M>, const M: usize>(
    model: &L,
    ul: [f64; M],
    hl: f64,
    hr: f64,
) -> Result<f64, String> {
    let ur = model.admissible_jump(&ul, hl, hr).map_err(|e| e.to_string())?;
    let s = singular_cell_integral(model, &ul, &ur, hr - hl).map_err(|e| e.to_string())?;
    let (fl, fr) = (model.flux(&ul), model.flux(&ur));
    Ok((0..M).map(|c| (fr[c] - fl[c] - s[c]).abs() / fl[c].abs().max(1.0)).fold(0.0, f64::max))
}

fn perturbation() -> Result<Verdict, String> {
    const CASE: &str = "swe-lake-perturbation-small";
    let mut v = Verdict::default();
    let spec = case(CASE).map_err(|e| e.to_string())?;
    let pspec = spec.perturbation.ok_or("case has no perturbation")?;
    let amplitude = pspec.perturbation.amplitude();
    let trace = |scheme: &str, n: usize| {
        perturbation_study(CASE, scheme, n, pspec.t_end, None).map_err(|e| e.to_string())
    };

    let reference = trace(&pspec.reference_scheme, pspec.n * pspec.reference_factor)?.envelope();
    for q in [4, 6, 8] {
        let scheme = format!("weno3gf-am{q}");
        let env = trace(&scheme, pspec.n)?.envelope();
        let ratios: Vec<f64> = env.iter().zip(&reference).map(|(a, b)| a / b).collect();
        v.check(
            ratios.iter().all(|r| (0.5..=2.0).contains(r)),
            format!("{scheme} envelope ratios {}", fmt_orders(&ratios)),
        );
    }
    let nwb = trace("weno3-nwb", pspec.n)?.envelope();
    let background = nwb.iter().fold(0.0_f64, |a, &b| a.max(b));
    v.check(
        background > 10.0 * amplitude,
        format!("weno3-nwb background {background:.2e} vs amplitude {amplitude:.0e}"),
    );

    // Without a perturbation every well-balanced scheme stays put.
    let still = run_case(
        CASE,
        "weno3gf-am4",
        pspec.n,
        &RunOptions {
            t_end: Some(pspec.t_end),
            perturbation: Some(pspec.perturbation.with_amplitude(0.0)),
            skip_reference: true,
            ..RunOptions::default()
        },
    )
    .map_err(|e| e.to_string())?;
    let dev = still.deviations().iter().flatten().fold(0.0_f64, |a, &b| a.max(b.abs()));
    v.check(dev <= 1e-12, format!("zero amplitude deviation {dev:.1e}"));
    Ok(v)
}
