//! Case runs, error norms, convergence tables, perturbation traces and CSV output.

use std::io::Write;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::cases::{case, CaseModel, CaseSetup, Initial, Mode, Perturbation, Reference, SchemeId};
use crate::error::{Error, Result};
use crate::global_flux::{accumulate_bathymetry, QuadraturePlan, SingularityRegistry};
use crate::grid::{Grid, State};
use crate::integrator::{BoundaryPolicy, SchemeConfig, SchemeKind, SidePolicy, Solver};
use crate::model::BalanceLaw;
use crate::multistep::{multistep_weights, Family};
use crate::steady::{steady_sweep_extended, SteadyProblem};
use crate::weno::WenoOrder;

/// Leading and trailing sweep band `(k + s + 1, k + 1)`: everything the interior
/// residual of a WENO-`p` global-flux scheme with an `s`-step rule reads.
pub fn sweep_band(weno: WenoOrder, steps: usize) -> (usize, usize) {
    (weno.k() + steps + 1, weno.k() + 1)
}

/// `Δx Σ_i |u_i − u*_i|` per component.
pub fn l1_error<const M: usize>(numeric: &State<M>, reference: &State<M>) -> Result<[f64; M]> {
    if numeric.grid() != reference.grid() {
        return Err(Error::GridMismatch(
            "numeric and reference states live on different grids".into(),
        ));
    }
    let dx = numeric.grid().dx();
    let mut out = [0.0; M];
    for (a, b) in numeric.values().iter().zip(reference.values()) {
        for c in 0..M {
            out[c] += (a[c] - b[c]).abs();
        }
    }
    Ok(out.map(|v| v * dx))
}

/// `log₂(e_k / e_{k+1})` for consecutive entries; `None` when either error is not positive.
pub fn observed_order(errors: &[f64]) -> Vec<Option<f64>> {
    errors
        .windows(2)
        .map(|w| {
            (w[0] > 0.0 && w[1] > 0.0 && w[0].is_finite() && w[1].is_finite())
                .then(|| (w[0] / w[1]).log2())
        })
        .collect()
}

/// Overrides applied to a case run.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub t_end: Option<f64>,
    /// Force steady mode (`true`) or a transient run (`false` needs `t_end`).
    pub steady: Option<bool>,
    pub cfl: Option<f64>,
    pub max_steps: Option<usize>,
    /// Replaces the case perturbation.
    pub perturbation: Option<Perturbation>,
    /// Replaces the case initial data.
    pub initial: Option<Initial>,
    /// Skip computing the reference solution.
    pub skip_reference: bool,
}

/// Outcome of one run, with node-major component values.
#[derive(Debug, Clone)]
pub struct RunResult {
    pub case: String,
    pub scheme: String,
    pub n: usize,
    pub x: Vec<f64>,
    pub state: Vec<Vec<f64>>,
    /// Unperturbed initial data (the scheme's own steady state where applicable).
    pub baseline: Vec<Vec<f64>>,
    pub reference: Option<Vec<Vec<f64>>>,
    pub errors: Option<Vec<f64>>,
    pub t_final: f64,
    pub converged: bool,
    pub residual: f64,
    pub elapsed: Duration,
}

impl RunResult {
    pub fn components(&self) -> usize {
        self.state.first().map_or(0, Vec::len)
    }

    /// `state − baseline` per node.
    pub fn deviations(&self) -> Vec<Vec<f64>> {
        self.state
            .iter()
            .zip(&self.baseline)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect())
            .collect()
    }
}

struct Run<const M: usize> {
    state: State<M>,
    baseline: State<M>,
    t_final: f64,
    converged: bool,
    residual: f64,
}

struct Prepared<'a, L: BalanceLaw<M>, const M: usize> {
    solver: Solver<'a, L, M>,
    baseline: State<M>,
    mode: Mode,
}

/// Grid, unperturbed initial data and a configured solver for one run.
fn prepare<'a, L: BalanceLaw<M>, const M: usize>(
    setup: &'a CaseSetup<L, M>,
    scheme: &SchemeId,
    n: usize,
    opts: &RunOptions,
) -> Result<Prepared<'a, L, M>> {
    let grid = Grid::new(setup.domain.0, setup.domain.1, n)?;
    let model = &setup.model;
    let mode = match (opts.steady, opts.t_end) {
        (Some(true), _) => Mode::Steady,
        (_, Some(t_end)) => Mode::Transient { t_end },
        (Some(false), None) => {
            return Err(Error::Config("a transient run needs a final time".into()))
        }
        (None, None) => setup.mode,
    };

    // Discrete steady state: the scheme's own sweep for global-flux schemes.
    let mut frozen = None;
    let initial_kind = opts.initial.unwrap_or(setup.initial);
    let baseline = match initial_kind {
        Initial::Exact => exact_state(setup, &grid)?,
        Initial::Steady => match (scheme.rule(), &setup.exact) {
            (Some(rule), _) => {
                // Seeding every p from the widest band gives one steady state for all
                // reconstruction orders; fall back to the scheme's own band when the
                // wider seeds leave the range of the analytic profile.
                let widest = sweep_band(WenoOrder::SEVEN, rule.steps());
                let nodes = match sweep(setup, rule.clone(), &grid, widest) {
                    Err(Error::Domain { .. }) => {
                        sweep(setup, rule.clone(), &grid, sweep_band(scheme.weno, rule.steps()))?
                    }
                    other => other?,
                };
                let nodes = Arc::new(nodes);
                let values = (0..=grid.last()).map(|j| nodes[j]).collect();
                frozen = Some(nodes);
                State::new(grid, values)?
            }
            (None, Some(_)) => exact_state(setup, &grid)?,
            (None, None) => {
                let rule = multistep_weights(Family::AdamsBashforth, 8)?;
                let nodes = sweep(setup, rule, &grid, (0, 0))?;
                State::new(grid, (0..=grid.last()).map(|j| nodes[j]).collect())?
            }
        },
        Initial::Lake { level } => {
            let geometry = model.geometry();
            let depth: Vec<f64> = match scheme.rule() {
                Some(rule) => {
                    let registry = SingularityRegistry::locate(&grid, geometry);
                    let plan = QuadraturePlan::new(rule.clone(), registry);
                    let b = accumulate_bathymetry(geometry, &grid, &plan, 0, grid.last(), 0.0);
                    (0..=grid.last()).map(|j| b[j]).collect()
                }
                None => grid.nodes().map(|x| geometry.value(x, 0.0)).collect(),
            };
            let values = depth
                .iter()
                .map(|h| std::array::from_fn(|c| if c == 0 { level + h } else { 0.0 }))
                .collect();
            State::new(grid, values)?
        }
    };

    let boundary = match (&setup.steady_boundary, mode, &frozen) {
        (Some(b), Mode::Steady, _) => b.clone(),
        (_, _, Some(nodes)) => BoundaryPolicy::both(SidePolicy::Frozen(nodes.clone())),
        _ => {
            let mut b = setup.boundary.clone();
            if setup.outlet_at_initial {
                b.right = SidePolicy::SubcriticalOutlet {
                    h: baseline.values()[grid.last() as usize][0],
                };
            }
            b
        }
    };
    let mut config = SchemeConfig::new(scheme.weno, scheme.kind.clone(), boundary);
    config.water_at_rest_fix =
        matches!(initial_kind, Initial::Lake { .. }) && scheme.is_well_balanced();
    if let Some(cfl) = opts.cfl.or(setup.cfl) {
        config.cfl = cfl;
    }
    config.max_steps = opts.max_steps.unwrap_or(match mode {
        Mode::Steady => 50_000,
        Mode::Transient { .. } => 1_000_000,
    });
    let solver = Solver::new(model, grid, config)?;
    Ok(Prepared {
        solver,
        baseline,
        mode,
    })
}

fn run_setup<L: BalanceLaw<M>, const M: usize>(
    setup: &CaseSetup<L, M>,
    scheme: &SchemeId,
    n: usize,
    opts: &RunOptions,
) -> Result<Run<M>> {
    let Prepared {
        solver,
        baseline,
        mode,
    } = prepare(setup, scheme, n, opts)?;
    let grid = *solver.grid();
    let perturbation = opts.perturbation.or(setup.perturbation);
    let mut initial = baseline.clone();
    if let Some(p) = perturbation {
        for (u, x) in initial.values_mut().iter_mut().zip(grid.nodes()) {
            u[0] += p.at(x);
        }
    }

    match mode {
        Mode::Steady => {
            let run = solver.run_to_steady(&initial)?;
            Ok(Run {
                residual: *run.residuals.last().unwrap(),
                state: run.state,
                baseline,
                t_final: run.time,
                converged: run.converged,
            })
        }
        Mode::Transient { t_end } => {
            let state = solver.run_to_time(&initial, 0.0, t_end)?;
            let residual = solver.residual(&state, t_end)?;
            Ok(Run {
                state,
                baseline,
                t_final: t_end,
                converged: true,
                residual,
            })
        }
    }
}

fn exact_state<L, const M: usize>(setup: &CaseSetup<L, M>, grid: &Grid) -> Result<State<M>> {
    let exact = setup
        .exact
        .as_ref()
        .ok_or_else(|| Error::Config("case has no exact solution".into()))?;
    Ok(State::from_fn(*grid, |x| exact(x, 0.0)))
}

fn sweep<L: BalanceLaw<M>, const M: usize>(
    setup: &CaseSetup<L, M>,
    rule: crate::multistep::MultiStepRule,
    grid: &Grid,
    (lead, trail): (usize, usize),
) -> Result<crate::grid::NodeField<[f64; M]>> {
    let recipe = setup
        .sweep
        .as_ref()
        .ok_or_else(|| Error::Config("case has no steady sweep".into()))?;
    let problem = SteadyProblem::new(
        &setup.model,
        rule,
        *grid,
        recipe.seeds.clone(),
        recipe.branch,
    )
    .with_band(lead, trail);
    steady_sweep_extended(&problem, 0.0)
}

fn rows<const M: usize>(s: &State<M>) -> Vec<Vec<f64>> {
    s.values().iter().map(|u| u.to_vec()).collect()
}

fn finish<L: BalanceLaw<M>, const M: usize>(
    setup: &CaseSetup<L, M>,
    case_id: &str,
    scheme: &SchemeId,
    n: usize,
    opts: &RunOptions,
) -> Result<RunResult> {
    let start = Instant::now();
    let run = run_setup(setup, scheme, n, opts)?;
    let elapsed = start.elapsed();
    let grid = *run.state.grid();
    let reference = if opts.skip_reference {
        None
    } else {
        match &setup.reference {
            Reference::Exact => setup.exact.as_ref().map(|f| {
                grid.nodes()
                    .map(|x| f(x, run.t_final).to_vec())
                    .collect::<Vec<_>>()
            }),
            Reference::Initial => Some(rows(&run.baseline)),
            Reference::Scheme { scheme: id, factor } => {
                let fine = run_case(
                    case_id,
                    id,
                    n * factor,
                    &RunOptions {
                        skip_reference: true,
                        ..opts.clone()
                    },
                )?;
                Some(fine.state.into_iter().step_by(*factor).collect())
            }
        }
    };
    let state = rows(&run.state);
    let errors = reference.as_ref().map(|r| {
        let mut e = vec![0.0; M];
        for (a, b) in state.iter().zip(r) {
            for c in 0..M {
                e[c] += (a[c] - b[c]).abs();
            }
        }
        e.into_iter().map(|v| v * grid.dx()).collect()
    });
    Ok(RunResult {
        case: case_id.to_string(),
        scheme: scheme.to_string(),
        n,
        x: grid.nodes().collect(),
        state,
        baseline: rows(&run.baseline),
        reference,
        errors,
        t_final: run.t_final,
        converged: run.converged,
        residual: run.residual,
        elapsed,
    })
}

/// Runs one case with one scheme on `n` intervals.
pub fn run_case(case_id: &str, scheme_id: &str, n: usize, opts: &RunOptions) -> Result<RunResult> {
    let spec = case(case_id)?;
    let scheme: SchemeId = scheme_id.parse()?;
    if n < 4 {
        return Err(Error::Config(format!("need at least 4 intervals, got {n}")));
    }
    match &spec.setup {
        CaseModel::Scalar(setup) => finish(setup, case_id, &scheme, n, opts),
        CaseModel::ShallowWater(setup) => finish(setup, case_id, &scheme, n, opts),
    }
}

/// Residual and drift of a case's unperturbed initial data under one scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WellBalanceCheck {
    /// `‖rhs‖∞` of the initial data.
    pub residual: f64,
    /// `max |u(t_steps) − u(0)|` after the requested number of SSP-RK3 steps.
    pub drift: f64,
}

/// Measures how far a case's unperturbed initial data (the scheme's own steady
/// state for global-flux schemes) is from being stationary.
pub fn well_balance_check(
    case_id: &str,
    scheme_id: &str,
    n: usize,
    steps: usize,
) -> Result<WellBalanceCheck> {
    fn check<L: BalanceLaw<M>, const M: usize>(
        setup: &CaseSetup<L, M>,
        scheme: &SchemeId,
        n: usize,
        steps: usize,
    ) -> Result<WellBalanceCheck> {
        let Prepared {
            solver, baseline, ..
        } = prepare(
            setup,
            scheme,
            n,
            &RunOptions {
                t_end: Some(0.0),
                initial: setup.sweep.as_ref().map(|_| Initial::Steady),
                ..RunOptions::default()
            },
        )?;
        let residual = solver.residual(&baseline, 0.0)?;
        let mut state = baseline.clone();
        let mut t = 0.0;
        for step in 0..steps {
            let dt = solver.cfl_dt(&state)?;
            state = solver.ssp_rk3_step(&state, t, dt, step)?;
            t += dt;
        }
        Ok(WellBalanceCheck {
            residual,
            drift: state.max_abs_diff(&baseline),
        })
    }
    let spec = case(case_id)?;
    let scheme: SchemeId = scheme_id.parse()?;
    match &spec.setup {
        CaseModel::Scalar(setup) => check(setup, &scheme, n, steps),
        CaseModel::ShallowWater(setup) => check(setup, &scheme, n, steps),
    }
}

/// One line of a convergence table.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub errors: Vec<f64>,
    /// Blank on the first row.
    pub orders: Vec<Option<f64>>,
}

/// Runs the ladder in parallel and derives orders from consecutive rows.
pub fn convergence_study(
    case_id: &str,
    scheme_id: &str,
    n_list: &[usize],
    opts: &RunOptions,
) -> Result<Vec<ConvergenceRow>> {
    if n_list.is_empty() {
        return Err(Error::Config("empty resolution list".into()));
    }
    if n_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config("resolutions must increase".into()));
    }
    let results: Vec<RunResult> = n_list
        .par_iter()
        .map(|&n| run_case(case_id, scheme_id, n, opts))
        .collect::<Result<_>>()?;
    let errors: Vec<Vec<f64>> = results
        .iter()
        .map(|r| {
            r.errors
                .clone()
                .ok_or_else(|| Error::Config(format!("case {case_id} has no reference")))
        })
        .collect::<Result<_>>()?;
    let m = errors[0].len();
    let per_component: Vec<Vec<Option<f64>>> = (0..m)
        .map(|c| observed_order(&errors.iter().map(|e| e[c]).collect::<Vec<_>>()))
        .collect();
    Ok(results
        .iter()
        .enumerate()
        .map(|(i, r)| ConvergenceRow {
            n: r.n,
            errors: errors[i].clone(),
            orders: (0..m)
                .map(|c| if i == 0 { None } else { per_component[c][i - 1] })
                .collect(),
        })
        .collect())
}

/// Deviation of a perturbed run from the scheme's own unperturbed steady state.
#[derive(Debug, Clone)]
pub struct PerturbationTrace {
    pub x: Vec<f64>,
    pub deviations: Vec<Vec<f64>>,
    pub run: RunResult,
}

impl PerturbationTrace {
    /// `max_i |Δ_c|` per component.
    pub fn envelope(&self) -> Vec<f64> {
        let m = self.deviations.first().map_or(0, Vec::len);
        (0..m)
            .map(|c| self.deviations.iter().fold(0.0_f64, |a, d| a.max(d[c].abs())))
            .collect()
    }
}

/// Perturbs the case's steady state with its perturbation scaled to `amplitude`
/// and runs to `t_end`.
pub fn perturbation_study(
    case_id: &str,
    scheme_id: &str,
    n: usize,
    t_end: f64,
    amplitude: Option<f64>,
) -> Result<PerturbationTrace> {
    let spec = case(case_id)?;
    let pspec = spec.perturbation.as_ref().ok_or_else(|| {
        Error::Config(format!("case {case_id} defines no perturbation"))
    })?;
    let perturbation = match amplitude {
        Some(a) => pspec.perturbation.with_amplitude(a),
        None => pspec.perturbation,
    };
    let run = run_case(
        case_id,
        scheme_id,
        n,
        &RunOptions {
            t_end: Some(t_end),
            perturbation: Some(perturbation),
            skip_reference: true,
            ..RunOptions::default()
        },
    )?;
    Ok(PerturbationTrace {
        x: run.x.clone(),
        deviations: run.deviations(),
        run,
    })
}

/// Scientific notation with 17 significant digits.
pub fn format_real(v: f64) -> String {
    format!("{v:.16e}")
}

fn component_names(m: usize) -> &'static [&'static str] {
    if m == 1 {
        &["u"]
    } else {
        &["h", "q"]
    }
}

fn csv_error(e: csv::Error) -> Error {
    Error::Config(format!("CSV output failed: {e}"))
}

/// Node table: `x`, the components and, when known, the reference components.
pub fn write_state_csv<W: Write>(out: W, run: &RunResult) -> Result<()> {
    let names = component_names(run.components());
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["x".to_string()];
    header.extend(names.iter().map(|s| s.to_string()));
    if run.reference.is_some() {
        header.extend(names.iter().map(|s| format!("{s}_ref")));
    }
    w.write_record(&header).map_err(csv_error)?;
    for (i, x) in run.x.iter().enumerate() {
        let mut rec = vec![format_real(*x)];
        rec.extend(run.state[i].iter().map(|v| format_real(*v)));
        if let Some(r) = &run.reference {
            rec.extend(r[i].iter().map(|v| format_real(*v)));
        }
        w.write_record(&rec).map_err(csv_error)?;
    }
    w.flush().map_err(|e| Error::Config(format!("CSV output failed: {e}")))
}

/// `n, err_c0, ord_c0[, err_c1, ord_c1]`; missing orders print as `-`.
pub fn write_convergence_csv<W: Write>(out: W, rows: &[ConvergenceRow]) -> Result<()> {
    let m = rows.first().map_or(1, |r| r.errors.len());
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["n".to_string()];
    for c in 0..m {
        header.push(format!("err_c{c}"));
        header.push(format!("ord_c{c}"));
    }
    w.write_record(&header).map_err(csv_error)?;
    for row in rows {
        let mut rec = vec![row.n.to_string()];
        for c in 0..m {
            rec.push(format_real(row.errors[c]));
            rec.push(row.orders[c].map_or_else(|| "-".to_string(), format_real));
        }
        w.write_record(&rec).map_err(csv_error)?;
    }
    w.flush().map_err(|e| Error::Config(format!("CSV output failed: {e}")))
}

/// `x, d_eta, d_q` for shallow water or `x, d_u` for the scalar law.
pub fn write_perturbation_csv<W: Write>(out: W, trace: &PerturbationTrace) -> Result<()> {
    let m = trace.deviations.first().map_or(1, Vec::len);
    let mut w = csv::Writer::from_writer(out);
    let header: &[&str] = if m == 1 {
        &["x", "d_u"]
    } else {
        &["x", "d_eta", "d_q"]
    };
    w.write_record(header).map_err(csv_error)?;
    for (x, d) in trace.x.iter().zip(&trace.deviations) {
        let mut rec = vec![format_real(*x)];
        rec.extend(d.iter().map(|v| format_real(*v)));
        w.write_record(&rec).map_err(csv_error)?;
    }
    w.flush().map_err(|e| Error::Config(format!("CSV output failed: {e}")))
}

/// Which scheme family a run used, for reporting.
pub fn scheme_label(kind: &SchemeKind) -> &'static str {
    match kind {
        SchemeKind::GlobalFlux(_) => "global flux",
        SchemeKind::NonWellBalanced => "non-well-balanced",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn l1_examples() {
        let grid = Grid::new(0.0, 2.0, 8).unwrap();
        let a = State::from_fn(grid, |x| [x, 1.0]);
        assert_eq!(l1_error(&a, &a).unwrap(), [0.0, 0.0]);
        let b = State::from_fn(grid, |x| [x + 0.5, 1.0]);
        assert!((l1_error(&a, &b).unwrap()[0] - 0.5 * 0.25 * 9.0).abs() < 1e-15);
        let other = State::from_fn(Grid::new(0.0, 2.0, 4).unwrap(), |x| [x, 1.0]);
        assert!(matches!(l1_error(&a, &other), Err(Error::GridMismatch(_))));
    }

    #[test]
    fn order_examples() {
        let o = observed_order(&[1e-2, 6.25e-4]);
        assert!((o[0].unwrap() - 4.0).abs() < 1e-12);
        let o = observed_order(&[1.112e-4, 7.865e-6]);
        assert!((o[0].unwrap() - 3.82).abs() < 0.01);
        assert!(observed_order(&[1.0]).is_empty());
        assert_eq!(observed_order(&[0.0, 0.0]), vec![None]);
    }

    #[test]
    fn seventeen_digits() {
        assert_eq!(format_real(0.1), "1.0000000000000001e-1");
        for v in [std::f64::consts::PI, -1.234e-300, 6.02e23] {
            assert_eq!(format_real(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn convergence_rows_have_blank_first_order() {
        let rows =
            convergence_study("burgers-smooth-steady", "weno3gf-am4", &[20, 40], &RunOptions::default())
                .unwrap();
        assert_eq!(rows[0].orders, vec![None]);
        assert!(rows[1].orders[0].unwrap() > 3.5);
        let mut buf = Vec::new();
        write_convergence_csv(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("n,err_c0,ord_c0\n20,"));
        assert!(text.lines().nth(1).unwrap().ends_with(",-"));
    }

    #[test]
    fn rejects_bad_ladders() {
        assert!(convergence_study("burgers-smooth-steady", "weno3gf-am4", &[40, 20], &RunOptions::default()).is_err());
        assert!(run_case("burgers-smooth-steady", "weno3gf-am4", 2, &RunOptions::default()).is_err());
    }
}
