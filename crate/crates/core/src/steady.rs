//! Discrete stationary solutions by a multi-step sweep in flux space, and the
//! exact stationary solutions used as references.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::global_flux::{cell_source_integral, CellRule, QuadraturePlan, SingularityRegistry};
use crate::grid::{Grid, NodeField, State};
use crate::model::{BalanceLaw, FluxBranch, Geometry, ShallowWaterModel};
use crate::multistep::MultiStepRule;

/// Pointwise stationary profile `x ↦ U*(x)`.
pub type Profile<const M: usize> = Arc<dyn Fn(f64) -> Result<[f64; M]> + Send + Sync>;

/// How the first `s` values of a sweep are obtained.
#[derive(Clone)]
pub enum SeedSource<const M: usize> {
    /// Evaluate a known stationary profile.
    Exact(Profile<M>),
    /// Explicit values for the `s` seed nodes.
    Values(Vec<[f64; M]>),
    /// RK4 integration of `dF/dx = S(U) H_x + s(U, x)` from a state at `x0`,
    /// ten substeps per cell.
    Integrate { x0: f64, u0: [f64; M] },
}

/// Flux branch used at each node of the sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BranchPlan {
    Fixed(FluxBranch),
    /// `before` on nodes left of `at`, `after` from `at` on. Targets that fall
    /// slightly below the sonic minimum near `at` are clamped to the sonic state.
    Switch {
        at: f64,
        before: FluxBranch,
        after: FluxBranch,
    },
}

impl BranchPlan {
    pub fn at(&self, x: f64) -> FluxBranch {
        match *self {
            BranchPlan::Fixed(b) => b,
            BranchPlan::Switch { at, before, after } => {
                if x < at {
                    before
                } else {
                    after
                }
            }
        }
    }
}

/// Multiple of the tolerance within which a non-decreasing update counts as
/// round-off stagnation.
const STALL_FACTOR: f64 = 1e4;

/// Fixed-point controls for implicit (AM) and singular cells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepTolerance {
    pub relative: f64,
    pub max_iterations: usize,
    pub damping: f64,
    /// Largest sonic gap, relative to the flux, clamped near a branch switch.
    pub sonic_gap: f64,
}

impl Default for SweepTolerance {
    fn default() -> Self {
        Self {
            relative: 4.0 * f64::EPSILON,
            max_iterations: 100,
            damping: 0.5,
            sonic_gap: 5e-2,
        }
    }
}

/// Sweep definition. Seeds occupy nodes `−lead..−lead+s−1`; the output covers
/// `−lead..=N+trail` so that it can also fill ghost nodes.
pub struct SteadyProblem<'a, L: ?Sized, const M: usize> {
    pub model: &'a L,
    pub rule: MultiStepRule,
    pub grid: Grid,
    pub seeds: SeedSource<M>,
    pub branch: BranchPlan,
    pub registry: SingularityRegistry,
    pub lead: usize,
    pub trail: usize,
    pub tolerance: SweepTolerance,
}

impl<'a, L: BalanceLaw<M> + ?Sized, const M: usize> SteadyProblem<'a, L, M> {
    pub fn new(
        model: &'a L,
        rule: MultiStepRule,
        grid: Grid,
        seeds: SeedSource<M>,
        branch: BranchPlan,
    ) -> Self {
        let registry = SingularityRegistry::locate(&grid, model.geometry());
        Self {
            model,
            rule,
            grid,
            seeds,
            branch,
            registry,
            lead: 0,
            trail: 0,
            tolerance: SweepTolerance::default(),
        }
    }

    pub fn with_band(mut self, lead: usize, trail: usize) -> Self {
        self.lead = lead;
        self.trail = trail;
        self
    }

    pub fn with_tolerance(mut self, tolerance: SweepTolerance) -> Self {
        self.tolerance = tolerance;
        self
    }
}

/// Sweep output on all nodes, interior and band.
pub fn steady_sweep_extended<L: BalanceLaw<M> + ?Sized, const M: usize>(
    problem: &SteadyProblem<'_, L, M>,
    t: f64,
) -> Result<NodeField<[f64; M]>> {
    let SteadyProblem {
        model,
        grid,
        tolerance,
        ..
    } = problem;
    let s = problem.rule.steps();
    problem.registry.validate(s, grid)?;
    let first = -(problem.lead as isize);
    let last = grid.last() + problem.trail as isize;
    if last - first < s as isize {
        return Err(Error::Config("grid too short for the sweep seeds".into()));
    }
    let plan = QuadraturePlan::new(problem.rule.clone(), problem.registry.clone());
    let mut nodes = NodeField::filled(first, (last - first + 1) as usize, [0.0; M]);

    let seeds = seed_values(problem, first, s, t)?;
    for (m, u) in seeds.into_iter().enumerate() {
        model.check_state(&u).map_err(|e| e.at_node(first + m as isize))?;
        nodes[first + m as isize] = u;
    }

    for j in first + s as isize - 1..last {
        let ul = nodes[j];
        let fl = model.flux(&ul);
        let x_next = grid.node(j + 1);
        let rule = plan.cell(j);
        let (branch, mut guess) = match rule {
            CellRule::Singular => {
                let geometry = model.geometry();
                let guess = model
                    .admissible_jump(&ul, geometry.value(grid.node(j), t), geometry.value(x_next, t))
                    .map_err(|e| e.at_node(j + 1))?;
                (model.branch_of(&guess), guess)
            }
            _ => (problem.branch.at(x_next), ul),
        };
        let implicit = match plan.stencil(j) {
            Some((_, w)) => *w.last().unwrap() != 0.0,
            None => true,
        };

        let invert = |target: &[f64; M]| -> Result<[f64; M]> {
            match model.invert_flux(target, branch) {
                Err(Error::NoRoot { gap, .. }) if near_switch(problem, x_next) => {
                    let scale = target.iter().fold(1.0f64, |a, v| a.max(v.abs()));
                    match model.sonic_state(target) {
                        Some(u) if gap <= tolerance.sonic_gap * scale => Ok(u),
                        _ => Err(Error::NoRoot {
                            branch,
                            gap,
                            node: Some(j + 1),
                        }),
                    }
                }
                other => other.map_err(|e| e.at_node(j + 1)),
            }
        };

        nodes[j + 1] = guess;
        let mut target = add(&fl, &cell_source_integral(*model, &plan, &nodes, grid, j, t)?);
        let mut u = invert(&target)?;
        if implicit {
            let mut previous = f64::INFINITY;
            let mut converged = false;
            for _ in 0..tolerance.max_iterations {
                nodes[j + 1] = u;
                let next = add(&fl, &cell_source_integral(*model, &plan, &nodes, grid, j, t)?);
                let scale = next.iter().fold(1.0f64, |a, v| a.max(v.abs()));
                let change = max_diff(&next, &target);
                // Below the tolerance, or stuck at round-off just above it.
                let stalled = change >= previous && change <= STALL_FACTOR * tolerance.relative * scale;
                let next = if change > previous {
                    std::array::from_fn(|c| target[c] + tolerance.damping * (next[c] - target[c]))
                } else {
                    next
                };
                previous = change;
                target = next;
                u = invert(&target)?;
                if change <= tolerance.relative * scale || stalled {
                    converged = true;
                    break;
                }
            }
            if !converged {
                return Err(Error::NoConvergence {
                    node: j + 1,
                    residual: previous,
                });
            }
        }
        guess = u;
        nodes[j + 1] = guess;
    }
    Ok(nodes)
}

/// Discrete stationary solution on the interior nodes.
pub fn steady_sweep<L: BalanceLaw<M> + ?Sized, const M: usize>(
    problem: &SteadyProblem<'_, L, M>,
    t: f64,
) -> Result<State<M>> {
    let nodes = steady_sweep_extended(problem, t)?;
    let grid = problem.grid;
    let values = (0..=grid.last()).map(|j| nodes[j]).collect();
    State::new(grid, values)
}

fn near_switch<L: ?Sized, const M: usize>(problem: &SteadyProblem<'_, L, M>, x: f64) -> bool {
    match problem.branch {
        BranchPlan::Fixed(_) => false,
        BranchPlan::Switch { at, .. } => {
            (x - at).abs() <= (problem.rule.steps() + 1) as f64 * problem.grid.dx()
        }
    }
}

fn seed_values<L: BalanceLaw<M> + ?Sized, const M: usize>(
    problem: &SteadyProblem<'_, L, M>,
    first: isize,
    s: usize,
    t: f64,
) -> Result<Vec<[f64; M]>> {
    let xs: Vec<f64> = (0..s).map(|m| problem.grid.node(first + m as isize)).collect();
    match &problem.seeds {
        SeedSource::Exact(f) => xs.iter().map(|&x| f(x)).collect(),
        SeedSource::Values(v) => {
            if v.len() != s {
                return Err(Error::Config(format!(
                    "{} seed values given, the rule needs {s}",
                    v.len()
                )));
            }
            Ok(v.clone())
        }
        SeedSource::Integrate { x0, u0 } => {
            let h = problem.grid.dx() / 10.0;
            let mut out = Vec::with_capacity(s);
            let (mut x, mut u) = (*x0, *u0);
            for &target in &xs {
                u = integrate_flux_ode(problem.model, problem.branch, u, x, target, h, t)?;
                x = target;
                out.push(u);
            }
            Ok(out)
        }
    }
}

/// Classical RK4 on `dF/dx = S(U(F)) H_x + s(U(F), x)` from `x0` to `x1` with steps of about `h`.
pub fn integrate_flux_ode<L: BalanceLaw<M> + ?Sized, const M: usize>(
    model: &L,
    branch: BranchPlan,
    u0: [f64; M],
    x0: f64,
    x1: f64,
    h: f64,
    t: f64,
) -> Result<[f64; M]> {
    let steps = ((x1 - x0).abs() / h).ceil().max(1.0) as usize;
    let dx = (x1 - x0) / steps as f64;
    let geometry = model.geometry();
    let rate = |x: f64, f: &[f64; M]| -> Result<[f64; M]> {
        let u = model.invert_flux(f, branch.at(x))?;
        let sc = model.source_coeff(&u);
        let ps = model.pointwise_source(&u, x);
        let hx = geometry.slope(x, t);
        Ok(std::array::from_fn(|c| sc[c] * hx + ps[c]))
    };
    if x1 == x0 {
        return Ok(u0);
    }
    let mut f = model.flux(&u0);
    let mut x = x0;
    for _ in 0..steps {
        let k1 = rate(x, &f)?;
        let k2 = rate(x + 0.5 * dx, &axpy(&f, 0.5 * dx, &k1))?;
        let k3 = rate(x + 0.5 * dx, &axpy(&f, 0.5 * dx, &k2))?;
        let k4 = rate(x + dx, &axpy(&f, dx, &k3))?;
        f = std::array::from_fn(|c| f[c] + dx / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]));
        x += dx;
    }
    model.invert_flux(&f, branch.at(x1))
}

fn add<const M: usize>(a: &[f64; M], b: &[f64; M]) -> [f64; M] {
    std::array::from_fn(|c| a[c] + b[c])
}

fn axpy<const M: usize>(a: &[f64; M], s: f64, b: &[f64; M]) -> [f64; M] {
    std::array::from_fn(|c| a[c] + s * b[c])
}

fn max_diff<const M: usize>(a: &[f64; M], b: &[f64; M]) -> f64 {
    (0..M).fold(0.0, |m, c| m.max((a[c] - b[c]).abs()))
}

/// `U(F)` on a branch.
pub fn invert_flux<L: BalanceLaw<M> + ?Sized, const M: usize>(
    model: &L,
    target: &[f64; M],
    branch: FluxBranch,
) -> Result<[f64; M]> {
    model.invert_flux(target, branch)
}

/// Right limit across a jump of `H`.
pub fn admissible_jump<L: BalanceLaw<M> + ?Sized, const M: usize>(
    model: &L,
    ul: &[f64; M],
    h_left: f64,
    h_right: f64,
) -> Result<[f64; M]> {
    model.admissible_jump(ul, h_left, h_right)
}

/// Nodal values of a profile.
pub fn exact_solution<const M: usize>(profile: &Profile<M>, grid: &Grid) -> Result<State<M>> {
    let values = grid
        .nodes()
        .map(|x| profile(x))
        .collect::<Result<Vec<_>>>()?;
    State::new(*grid, values)
}

/// Stationary profiles with closed forms or pointwise algebraic relations.
pub mod exact {
    use super::*;

    /// Scalar law with `S = U^p`: the invariant `U e^{−H}` (p = 2), `U − H` (p = 1)
    /// or `U^{2−p}/(2−p) − H` equals `constant`.
    pub fn burgers(p: u32, constant: f64, geometry: Geometry) -> Profile<1> {
        Arc::new(move |x| {
            let h = geometry.value(x, 0.0);
            match p {
                1 => Ok([constant + h]),
                2 => Ok([constant * h.exp()]),
                _ => {
                    let e = 2.0 - p as f64;
                    let w = e * (constant + h);
                    if w <= 0.0 {
                        return Err(Error::domain(format!("no real profile value at x = {x}")));
                    }
                    Ok([w.powf(1.0 / e)])
                }
            }
        })
    }

    /// Frictionless shallow water: `q` constant and `q²/(2h²) + g h − g H = energy`.
    pub fn bernoulli(model: &ShallowWaterModel, q: f64, energy: f64, branch: BranchPlan) -> Profile<2> {
        let model = model.clone();
        Arc::new(move |x| {
            let hx = model.geometry().value(x, 0.0);
            let g = model.gravity();
            let h = model.depth_from_energy(q, energy + g * hx, branch.at(x))?;
            Ok([h, q])
        })
    }

    /// Bernoulli profile through the state `(h0, q)` at `x0`.
    pub fn bernoulli_through(
        model: &ShallowWaterModel,
        x0: f64,
        h0: f64,
        q: f64,
        branch: BranchPlan,
    ) -> Profile<2> {
        let g = model.gravity();
        let energy = model.energy(h0, q) - g * model.geometry().value(x0, 0.0);
        bernoulli(model, q, energy, branch)
    }

    /// Transcritical profile: critical at the crest `x_c` of `−H`, subcritical
    /// upstream and supercritical downstream.
    pub fn transcritical(model: &ShallowWaterModel, q: f64, x_c: f64) -> Profile<2> {
        let g = model.gravity();
        let h_c = model.critical_depth(q);
        let energy = model.energy(h_c, q) - g * model.geometry().value(x_c, 0.0);
        bernoulli(
            model,
            q,
            energy,
            BranchPlan::Switch {
                at: x_c,
                before: FluxBranch::Subcritical,
                after: FluxBranch::Supercritical,
            },
        )
    }

    /// Parameters of the analytic steady state with `κ = k h |q|` friction.
    #[derive(Debug, Clone, Copy, PartialEq)]
    pub struct FrictionProfile {
        pub h0: f64,
        pub q0: f64,
        pub a: f64,
        pub b: f64,
        pub c: f64,
        pub k: f64,
        pub g: f64,
        pub x0: f64,
    }

    impl FrictionProfile {
        /// Free surface `z(x) = a − b (c x e^{cos 4πx} − 1/e) / (e − 1/e)`.
        pub fn surface(&self, x: f64) -> f64 {
            let e = std::f64::consts::E;
            let arg = 4.0 * std::f64::consts::PI * x;
            self.a - self.b * (self.c * x * arg.cos().exp() - 1.0 / e) / (e - 1.0 / e)
        }

        pub fn surface_slope(&self, x: f64) -> f64 {
            let e = std::f64::consts::E;
            let pi4 = 4.0 * std::f64::consts::PI;
            let ex = (pi4 * x).cos().exp();
            -self.b * self.c * ex * (1.0 - pi4 * x * (pi4 * x).sin()) / (e - 1.0 / e)
        }

        fn radicand(&self, x: f64) -> f64 {
            let (h0, q0) = (self.h0, self.q0);
            1.0 + 2.0 * h0 * h0 * self.g / (q0 * q0) * (self.surface(self.x0) - self.surface(x))
                - 2.0 * self.k * h0 * h0 * (x - self.x0)
        }

        pub fn depth(&self, x: f64) -> f64 {
            self.h0 / self.radicand(x).sqrt()
        }

        pub fn depth_slope(&self, x: f64) -> f64 {
            let (h0, q0) = (self.h0, self.q0);
            let d = -2.0 * h0 * h0 * self.g / (q0 * q0) * self.surface_slope(x)
                - 2.0 * self.k * h0 * h0;
            -0.5 * self.h0 * d / self.radicand(x).powf(1.5)
        }

        /// Depth at rest `H = h − z` and its slope.
        pub fn geometry(&self) -> Geometry {
            let (p1, p2) = (*self, *self);
            Geometry::stationary(
                move |x| p1.depth(x) - p1.surface(x),
                move |x| p2.depth_slope(x) - p2.surface_slope(x),
            )
        }

        pub fn profile(&self) -> Profile<2> {
            let p = *self;
            Arc::new(move |x| {
                let r = p.radicand(x);
                if r <= 0.0 {
                    return Err(Error::domain(format!("friction profile undefined at x = {x}")));
                }
                Ok([p.depth(x), p.q0])
            })
        }
    }
}
