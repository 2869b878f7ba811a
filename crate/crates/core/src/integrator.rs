//! Semi-discrete right-hand side, ghost-node boundaries, SSP-RK3 stepping and run drivers.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::global_flux::{accumulate_bathymetry, build_global_flux, QuadraturePlan, SingularityRegistry};
use crate::grid::{Grid, NodeField, State};
use crate::model::BalanceLaw;
use crate::multistep::MultiStepRule;
use crate::weno::{interface_sign, scheme_epsilon, split_reconstruct, Weno, WenoOrder};

/// Boundary values `(x, t) ↦ U`.
pub type TimeProfile<const M: usize> = Arc<dyn Fn(f64, f64) -> [f64; M] + Send + Sync>;

#[derive(Debug, Clone, PartialEq)]
pub enum SchemeKind {
    /// Reconstruct `F − R` with `R` from the multi-step rule.
    GlobalFlux(MultiStepRule),
    /// Reconstruct `F` and add the pointwise source at the nodes.
    NonWellBalanced,
}

/// Ghost-node policy on one side. The shallow-water variants act on `(h, q)`.
#[derive(Clone)]
pub enum SidePolicy<const M: usize> {
    Periodic,
    /// Degree-0 extrapolation of the boundary node.
    Extrapolate,
    /// Values of a known solution at the ghost nodes.
    Exact(TimeProfile<M>),
    /// Values that never change, indexed by node (usually a sweep output); nodes
    /// past either end of the field repeat its end value.
    Frozen(Arc<NodeField<[f64; M]>>),
    /// Fixed discharge, extrapolated depth.
    SubcriticalInlet { q: f64 },
    /// Fixed depth, extrapolated discharge.
    SubcriticalOutlet { h: f64 },
    /// Fixed depth and discharge.
    SupercriticalInlet { h: f64, q: f64 },
}

impl<const M: usize> std::fmt::Debug for SidePolicy<M> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SidePolicy::Periodic => write!(f, "Periodic"),
            SidePolicy::Extrapolate => write!(f, "Extrapolate"),
            SidePolicy::Exact(_) => write!(f, "Exact"),
            SidePolicy::Frozen(v) => write!(f, "Frozen({}..={})", v.first(), v.last()),
            SidePolicy::SubcriticalInlet { q } => write!(f, "SubcriticalInlet {{ q: {q} }}"),
            SidePolicy::SubcriticalOutlet { h } => write!(f, "SubcriticalOutlet {{ h: {h} }}"),
            SidePolicy::SupercriticalInlet { h, q } => {
                write!(f, "SupercriticalInlet {{ h: {h}, q: {q} }}")
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct BoundaryPolicy<const M: usize> {
    pub left: SidePolicy<M>,
    pub right: SidePolicy<M>,
}

impl<const M: usize> BoundaryPolicy<M> {
    pub fn periodic() -> Self {
        Self::both(SidePolicy::Periodic)
    }

    pub fn both(side: SidePolicy<M>) -> Self {
        Self {
            left: side.clone(),
            right: side,
        }
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self.left, SidePolicy::Periodic)
    }
}

#[derive(Debug, Clone)]
pub struct SchemeConfig<const M: usize> {
    pub weno: WenoOrder,
    pub epsilon: f64,
    pub scheme: SchemeKind,
    pub cfl: f64,
    pub boundary: BoundaryPolicy<M>,
    /// Shallow water only: integrate the momentum source in water-at-rest form.
    pub water_at_rest_fix: bool,
    /// Jumps of `H`; located from the geometry when `None`.
    pub registry: Option<SingularityRegistry>,
    pub steady_tol: f64,
    pub max_steps: usize,
}

impl<const M: usize> SchemeConfig<M> {
    pub fn new(weno: WenoOrder, scheme: SchemeKind, boundary: BoundaryPolicy<M>) -> Self {
        Self {
            weno,
            epsilon: scheme_epsilon(weno),
            scheme,
            cfl: 0.45,
            boundary,
            water_at_rest_fix: false,
            registry: None,
            steady_tol: 1e-13,
            max_steps: 1_000_000,
        }
    }
}

/// Result of a run to steady state.
#[derive(Debug, Clone)]
pub struct SteadyRun<const M: usize> {
    pub state: State<M>,
    /// `‖rhs‖∞` before each step, and after the last one.
    pub residuals: Vec<f64>,
    pub converged: bool,
    pub time: f64,
}

/// Space and time discretization of one model on one grid.
pub struct Solver<'a, L: ?Sized, const M: usize> {
    model: &'a L,
    grid: Grid,
    config: SchemeConfig<M>,
    weno: Weno,
    plan: Option<QuadraturePlan>,
    ghost: usize,
    bathymetry: Option<NodeField<f64>>,
}

impl<'a, L: BalanceLaw<M> + ?Sized, const M: usize> Solver<'a, L, M> {
    pub fn new(model: &'a L, grid: Grid, config: SchemeConfig<M>) -> Result<Self> {
        if !(config.cfl > 0.0 && config.cfl < 1.0) {
            return Err(Error::Config(format!("CFL must lie in (0, 1), got {}", config.cfl)));
        }
        let left_periodic = matches!(config.boundary.left, SidePolicy::Periodic);
        let right_periodic = matches!(config.boundary.right, SidePolicy::Periodic);
        if left_periodic != right_periodic {
            return Err(Error::Config("periodic boundaries must be set on both sides".into()));
        }
        for side in [&config.boundary.left, &config.boundary.right] {
            let swe_only = matches!(
                side,
                SidePolicy::SubcriticalInlet { .. }
                    | SidePolicy::SubcriticalOutlet { .. }
                    | SidePolicy::SupercriticalInlet { .. }
            );
            if swe_only && M != 2 {
                return Err(Error::Config(format!(
                    "{side:?} needs a two-component (h, q) model"
                )));
            }
        }
        let k = config.weno.k();
        let (plan, ghost) = match &config.scheme {
            SchemeKind::GlobalFlux(rule) => {
                let registry = config
                    .registry
                    .clone()
                    .unwrap_or_else(|| SingularityRegistry::locate(&grid, model.geometry()));
                registry.validate(rule.steps(), &grid)?;
                let ghost = k + rule.steps() + 1;
                (Some(QuadraturePlan::new(rule.clone(), registry)), ghost)
            }
            SchemeKind::NonWellBalanced => (None, k + 1),
        };
        if grid.n_intervals() < 2 * ghost && left_periodic {
            return Err(Error::Config(format!(
                "periodic grid with {} intervals is narrower than the stencil",
                grid.n_intervals()
            )));
        }
        let bathymetry = match (&plan, config.water_at_rest_fix) {
            (Some(plan), true) => {
                if model.hydrostatic().is_none() {
                    return Err(Error::Config(format!(
                        "{} has no water-at-rest formulation",
                        model.name()
                    )));
                }
                let g = ghost as isize;
                Some(accumulate_bathymetry(
                    model.geometry(),
                    &grid,
                    plan,
                    -g,
                    grid.last() + g,
                    0.0,
                ))
            }
            (None, true) => {
                return Err(Error::Config(
                    "the water-at-rest quadrature needs a global-flux scheme".into(),
                ))
            }
            _ => None,
        };
        let weno = Weno::new(config.weno).with_epsilon(config.epsilon);
        Ok(Self {
            model,
            grid,
            config,
            weno,
            plan,
            ghost,
            bathymetry,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn config(&self) -> &SchemeConfig<M> {
        &self.config
    }

    pub fn ghost_width(&self) -> usize {
        self.ghost
    }

    pub fn plan(&self) -> Option<&QuadraturePlan> {
        self.plan.as_ref()
    }

    /// Quadrature-consistent depth at rest `H̃` on the ghost-extended range, when the
    /// water-at-rest quadrature is enabled.
    pub fn bathymetry(&self) -> Option<&NodeField<f64>> {
        self.bathymetry.as_ref()
    }

    fn check_grid(&self, state: &State<M>) -> Result<()> {
        if state.grid() != &self.grid {
            return Err(Error::GridMismatch("state and solver grids differ".into()));
        }
        Ok(())
    }

    /// Interior values plus ghost nodes filled for time `t`.
    pub fn extend(&self, state: &State<M>, t: f64) -> Result<NodeField<[f64; M]>> {
        self.check_grid(state)?;
        let g = self.ghost as isize;
        let n = self.grid.last();
        let values = state.values();
        let mut ext = NodeField::filled(-g, values.len() + 2 * self.ghost, [0.0; M]);
        for (j, u) in values.iter().enumerate() {
            ext[j as isize] = *u;
        }
        if self.config.boundary.is_periodic() {
            ext[n] = values[0];
            for m in 1..=g {
                ext[-m] = values[(n - m) as usize];
                ext[n + m] = values[m as usize];
            }
            return Ok(ext);
        }
        let x = |j: isize| self.grid.node(j);
        for (side, nodes, edge) in [
            (&self.config.boundary.left, (1..=g).map(|m| -m).collect::<Vec<_>>(), 0),
            (&self.config.boundary.right, (1..=g).map(|m| n + m).collect(), n),
        ] {
            let edge_u = ext[edge];
            for j in nodes {
                ext[j] = match side {
                    SidePolicy::Periodic => unreachable!("checked at construction"),
                    SidePolicy::Extrapolate => edge_u,
                    SidePolicy::Exact(f) => f(x(j), t),
                    SidePolicy::Frozen(field) => field[j.clamp(field.first(), field.last())],
                    SidePolicy::SubcriticalInlet { q } => {
                        std::array::from_fn(|c| if c == 1 { *q } else { edge_u[c] })
                    }
                    SidePolicy::SubcriticalOutlet { h } => {
                        std::array::from_fn(|c| if c == 0 { *h } else { edge_u[c] })
                    }
                    SidePolicy::SupercriticalInlet { h, q } => {
                        std::array::from_fn(|c| match c {
                            0 => *h,
                            1 => *q,
                            _ => edge_u[c],
                        })
                    }
                };
            }
        }
        Ok(ext)
    }

    /// `−(𝓕̂_{i+1/2} − 𝓕̂_{i−1/2})/Δx` on the interior nodes, from ghost-filled data.
    pub fn rhs_extended(&self, ext: &NodeField<[f64; M]>, t: f64) -> Result<Vec<[f64; M]>> {
        let n = self.grid.last();
        let fluxes = match &self.plan {
            Some(plan) => {
                build_global_flux(self.model, plan, ext, &self.grid, t, self.bathymetry.as_ref())?
                    .modified
            }
            None => {
                for j in ext.first()..=ext.last() {
                    self.model.check_state(&ext[j]).map_err(|e| e.at_node(j))?;
                }
                NodeField::from_vec(
                    ext.first(),
                    ext.as_slice().iter().map(|u| self.model.flux(u)).collect(),
                )
            }
        };
        // Differences of interface values are taken relative to one common shift.
        let shift = fluxes[0];
        let k = self.config.weno.k();
        let width = 2 * k + 2;
        let mut interface = Vec::with_capacity(n as usize + 2);
        for i in -1..=n {
            let sign = interface_sign(self.model, ext, i)?;
            let window = fluxes.window(i - k as isize, width)?;
            interface.push(split_reconstruct(&self.weno, &sign, window, &shift));
        }
        let inv_dx = 1.0 / self.grid.dx();
        let geometry = self.model.geometry();
        let mut out = Vec::with_capacity(n as usize + 1);
        for j in 0..=n {
            let (lo, hi) = (&interface[j as usize], &interface[j as usize + 1]);
            let mut r: [f64; M] = std::array::from_fn(|c| -(hi[c] - lo[c]) * inv_dx);
            if self.plan.is_none() {
                let u = &ext[j];
                let x = self.grid.node(j);
                let sc = self.model.source_coeff(u);
                let ps = self.model.pointwise_source(u, x);
                let hx = geometry.slope(x, t);
                for c in 0..M {
                    r[c] += sc[c] * hx + ps[c];
                }
            }
            out.push(r);
        }
        if self.config.boundary.is_periodic() {
            out[n as usize] = out[0];
        }
        Ok(out)
    }

    pub fn rhs(&self, state: &State<M>, t: f64) -> Result<Vec<[f64; M]>> {
        let ext = self.extend(state, t)?;
        self.rhs_extended(&ext, t)
    }

    /// `‖rhs‖∞` over interior nodes and components.
    pub fn residual(&self, state: &State<M>, t: f64) -> Result<f64> {
        let r = self.rhs(state, t)?;
        Ok(r.iter().flatten().fold(0.0, |m, v| m.max(v.abs())))
    }

    /// `CFL Δx / max_i ρ(J_{i+1/2})`, or `CFL Δx` when every wave speed vanishes.
    pub fn cfl_dt(&self, state: &State<M>) -> Result<f64> {
        self.check_grid(state)?;
        let values = state.values();
        let mut speed = 0.0f64;
        for pair in values.windows(2) {
            speed = speed.max(self.model.roe_eigensystem(&pair[0], &pair[1]).spectral_radius());
        }
        if !speed.is_finite() {
            return Err(Error::domain("non-finite wave speed"));
        }
        let dx = self.grid.dx();
        Ok(if speed > 0.0 {
            self.config.cfl * dx / speed
        } else {
            self.config.cfl * dx
        })
    }

    /// One Shu–Osher SSP-RK3 step; `step` only labels errors.
    pub fn ssp_rk3_step(&self, state: &State<M>, t: f64, dt: f64, step: usize) -> Result<State<M>> {
        if !(dt > 0.0) {
            return Err(Error::Config(format!("time step must be positive, got {dt}")));
        }
        let u0 = state.values();
        let stage = |u: &[[f64; M]], time: f64, index: usize| -> Result<Vec<[f64; M]>> {
            let s = State::new(self.grid, u.to_vec())?;
            self.rhs(&s, time).map_err(|e| Error::BlowUp {
                step,
                stage: index,
                detail: e.to_string(),
            })
        };
        let combine = |a: f64, base: &[[f64; M]], b: f64, u: &[[f64; M]], l: &[[f64; M]], index: usize| {
            let out: Vec<[f64; M]> = base
                .iter()
                .zip(u)
                .zip(l)
                .map(|((x, y), z)| std::array::from_fn(|c| a * x[c] + b * (y[c] + dt * z[c])))
                .collect();
            for (j, v) in out.iter().enumerate() {
                if let Err(e) = self.model.check_state(v) {
                    return Err(Error::BlowUp {
                        step,
                        stage: index,
                        detail: e.at_node(j as isize).to_string(),
                    });
                }
            }
            Ok(out)
        };
        let l0 = stage(u0, t, 1)?;
        let u1 = combine(0.0, u0, 1.0, u0, &l0, 1)?;
        let l1 = stage(&u1, t + dt, 2)?;
        let u2 = combine(0.75, u0, 0.25, &u1, &l1, 2)?;
        let l2 = stage(&u2, t + 0.5 * dt, 3)?;
        let u3 = combine(1.0 / 3.0, u0, 2.0 / 3.0, &u2, &l2, 3)?;
        State::new(self.grid, u3)
    }

    /// Advances from `t0` to `t_end` with CFL-limited steps, clipping the last one.
    pub fn run_to_time(&self, initial: &State<M>, t0: f64, t_end: f64) -> Result<State<M>> {
        if !(t_end >= t0) {
            return Err(Error::Config(format!("final time {t_end} precedes start {t0}")));
        }
        let mut state = initial.clone();
        self.check_grid(&state)?;
        let mut t = t0;
        let mut steps = 0;
        while t < t_end {
            if steps >= self.config.max_steps {
                return Err(Error::Divergence(steps));
            }
            let dt = self.cfl_dt(&state)?.min(t_end - t);
            state = self.ssp_rk3_step(&state, t, dt, steps)?;
            steps += 1;
            t = if t_end - (t + dt) <= 4.0 * f64::EPSILON * t_end.abs() {
                t_end
            } else {
                t + dt
            };
        }
        Ok(state)
    }

    /// `steady_tol`, raised to the round-off floor `8 ε max|F| / Δx` of the residual.
    pub fn steady_tolerance(&self, state: &State<M>) -> Result<f64> {
        let mut scale = 0.0_f64;
        for u in state.values() {
            for f in self.model.flux(u) {
                scale = scale.max(f.abs());
            }
        }
        Ok(self
            .config
            .steady_tol
            .max(8.0 * f64::EPSILON * scale / self.grid.dx()))
    }

    /// Marches until `‖rhs‖∞` falls below [`Self::steady_tolerance`] or `max_steps` is hit.
    pub fn run_to_steady(&self, initial: &State<M>) -> Result<SteadyRun<M>> {
        let mut state = initial.clone();
        let mut t = 0.0;
        let mut residuals = Vec::new();
        for step in 0..=self.config.max_steps {
            let r = self.residual(&state, t)?;
            residuals.push(r);
            if r <= self.steady_tolerance(&state)? {
                return Ok(SteadyRun {
                    state,
                    residuals,
                    converged: true,
                    time: t,
                });
            }
            if step == self.config.max_steps {
                break;
            }
            let dt = self.cfl_dt(&state)?;
            state = self.ssp_rk3_step(&state, t, dt, step)?;
            t += dt;
        }
        Ok(SteadyRun {
            state,
            residuals,
            converged: false,
            time: t,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{BurgersModel, Geometry, ShallowWaterModel};
    use crate::multistep::{multistep_weights, Family};
    use crate::steady::{exact, steady_sweep_extended, BranchPlan, SeedSource, SteadyProblem};
    use crate::model::FluxBranch;

    fn gf(q: usize) -> SchemeKind {
        SchemeKind::GlobalFlux(multistep_weights(Family::AdamsMoulton, q).unwrap())
    }

    #[test]
    fn cfl_examples() {
        let model = ShallowWaterModel::frictionless(Geometry::flat());
        let grid = Grid::new(0.0, 25.0, 100).unwrap();
        let solver = Solver::new(&model, grid, SchemeConfig::new(WenoOrder::THREE, gf(4), BoundaryPolicy::both(SidePolicy::Extrapolate))).unwrap();
        let lake = State::from_fn(grid, |_| [2.0, 0.0]);
        let dt = solver.cfl_dt(&lake).unwrap();
        assert!((dt - 0.45 * 0.25 / 19.62f64.sqrt()).abs() < 1e-15);

        let burgers = BurgersModel::new(2, Geometry::flat()).unwrap();
        let grid = Grid::new(0.0, 1.0, 10).unwrap();
        let solver = Solver::new(&burgers, grid, SchemeConfig::new(WenoOrder::FIVE, SchemeKind::NonWellBalanced, BoundaryPolicy::periodic())).unwrap();
        let dt = solver.cfl_dt(&State::from_fn(grid, |_| [2.0])).unwrap();
        assert!((dt - 0.45 * 0.1 / 2.0).abs() < 1e-16);
        let dt = solver.cfl_dt(&State::from_fn(grid, |_| [0.0])).unwrap();
        assert!((dt - 0.045).abs() < 1e-16);
    }

    #[test]
    fn constant_periodic_state_has_zero_rhs() {
        let model = BurgersModel::new(2, Geometry::flat()).unwrap();
        let grid = Grid::new(0.0, 1.0, 32).unwrap();
        for scheme in [gf(6), SchemeKind::NonWellBalanced] {
            let solver = Solver::new(&model, grid, SchemeConfig::new(WenoOrder::SEVEN, scheme, BoundaryPolicy::periodic())).unwrap();
            let r = solver.rhs(&State::from_fn(grid, |_| [1.3]), 0.0).unwrap();
            assert!(r.iter().all(|v| v[0] == 0.0));
        }
    }

    #[test]
    fn rk3_matches_the_exponential_to_fourth_order() {
        // S(U) = U with H = x and constant data: U_t = U.
        let model = BurgersModel::manufactured(0.0, Geometry::linear(1.0, 0.0));
        let grid = Grid::new(0.0, 1.0, 20).unwrap();
        let solver = Solver::new(&model, grid, SchemeConfig::new(WenoOrder::THREE, SchemeKind::NonWellBalanced, BoundaryPolicy::periodic())).unwrap();
        let mut errs = Vec::new();
        for dt in [0.1, 0.05] {
            let u = solver.ssp_rk3_step(&State::from_fn(grid, |_| [1.0]), 0.0, dt, 0).unwrap();
            errs.push((u.values()[3][0] - f64::exp(dt)).abs());
        }
        assert!((errs[0] / errs[1]).log2() > 3.8, "{errs:?}");
    }

    #[test]
    fn zero_rhs_step_is_identity() {
        let model = ShallowWaterModel::frictionless(Geometry::flat());
        let grid = Grid::new(0.0, 1.0, 20).unwrap();
        let solver = Solver::new(&model, grid, SchemeConfig::new(WenoOrder::FIVE, gf(8), BoundaryPolicy::periodic())).unwrap();
        let s = State::from_fn(grid, |_| [1.5, 0.2]);
        assert_eq!(solver.ssp_rk3_step(&s, 0.0, 0.01, 0).unwrap(), s);
        assert_eq!(solver.run_to_time(&s, 0.0, 0.0).unwrap(), s);
    }

    #[test]
    fn rejects_bad_configurations() {
        let model = BurgersModel::new(2, Geometry::flat()).unwrap();
        let grid = Grid::new(0.0, 1.0, 32).unwrap();
        let mut config = SchemeConfig::new(WenoOrder::THREE, gf(4), BoundaryPolicy::periodic());
        config.cfl = 1.2;
        assert!(Solver::new(&model, grid, config).is_err());
        let config = SchemeConfig::new(WenoOrder::THREE, gf(4), BoundaryPolicy::both(SidePolicy::SubcriticalInlet { q: 1.0 }));
        assert!(Solver::new(&model, grid, config).is_err());
        let mut config = SchemeConfig::new(WenoOrder::THREE, gf(4), BoundaryPolicy::periodic());
        config.water_at_rest_fix = true;
        assert!(Solver::new(&model, grid, config).is_err());
    }

    #[test]
    fn sweep_output_is_a_discrete_equilibrium() {
        let model = BurgersModel::new(2, Geometry::linear(1.0, 0.0)).unwrap();
        let grid = Grid::new(-1.0, 1.0, 40).unwrap();
        let rule = multistep_weights(Family::AdamsMoulton, 6).unwrap();
        let band = 3 + rule.steps() + 1;
        let problem = SteadyProblem::new(
            &model,
            rule.clone(),
            grid,
            SeedSource::Exact(exact::burgers(2, 1.0, model.geometry().clone())),
            BranchPlan::Fixed(FluxBranch::ScalarPositive),
        )
        .with_band(band, band);
        let nodes = Arc::new(steady_sweep_extended(&problem, 0.0).unwrap());
        let state = State::new(grid, (0..=40).map(|j| nodes[j]).collect()).unwrap();
        for p in [WenoOrder::THREE, WenoOrder::FIVE, WenoOrder::SEVEN] {
            let config = SchemeConfig::new(p, SchemeKind::GlobalFlux(rule.clone()), BoundaryPolicy::both(SidePolicy::Frozen(nodes.clone())));
            let solver = Solver::new(&model, grid, config).unwrap();
            assert!(solver.residual(&state, 0.0).unwrap() <= 1e-12);
            let run = solver.run_to_steady(&state).unwrap();
            assert!(run.converged && run.residuals.len() == 1);
        }
        // Exact nodal values are only close to equilibrium.
        let exact_state = State::from_fn(grid, |x| [x.exp()]);
        let config = SchemeConfig::new(WenoOrder::THREE, SchemeKind::GlobalFlux(rule), BoundaryPolicy::both(SidePolicy::Frozen(nodes)));
        let r = Solver::new(&model, grid, config).unwrap().residual(&exact_state, 0.0).unwrap();
        assert!(r > 1e-12 && r < 1e-4, "{r}");
    }

    #[test]
    fn time_marching_from_exact_data_settles_on_the_sweep() {
        let model = BurgersModel::new(2, Geometry::linear(1.0, 0.0)).unwrap();
        let grid = Grid::new(-1.0, 1.0, 20).unwrap();
        let rule = multistep_weights(Family::AdamsMoulton, 4).unwrap();
        let band = 3 + rule.steps() + 1;
        let problem = SteadyProblem::new(
            &model,
            rule.clone(),
            grid,
            SeedSource::Exact(exact::burgers(2, 1.0, model.geometry().clone())),
            BranchPlan::Fixed(FluxBranch::ScalarPositive),
        )
        .with_band(band, band);
        let nodes = Arc::new(steady_sweep_extended(&problem, 0.0).unwrap());
        let sweep = State::new(grid, (0..=20).map(|j| nodes[j]).collect()).unwrap();
        let mut config = SchemeConfig::new(WenoOrder::THREE, SchemeKind::GlobalFlux(rule), BoundaryPolicy::both(SidePolicy::Frozen(nodes)));
        config.steady_tol = 1e-11;
        config.max_steps = 20_000;
        let solver = Solver::new(&model, grid, config).unwrap();
        let run = solver.run_to_steady(&State::from_fn(grid, |x| [x.exp()])).unwrap();
        assert!(run.converged);
        assert!(run.state.max_abs_diff(&sweep) < 1e-9);
    }
}
