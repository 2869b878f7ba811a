//! Source primitives `R_j` from multi-step quadrature and the modified fluxes
//! `𝓕_j = F(U_j) − R_j`, with singular cells at jumps of `H` and the water-at-rest
//! variant of the shallow-water momentum integral.

use crate::error::{Error, Result};
use crate::grid::{Grid, NodeField};
use crate::model::{BalanceLaw, Geometry};
use crate::multistep::MultiStepRule;

/// A jump of `H` located between nodes `index` and `index + 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularInterface {
    pub index: isize,
    pub position: f64,
}

/// Sorted singular interfaces of a grid.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SingularityRegistry {
    entries: Vec<SingularInterface>,
}

impl SingularityRegistry {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(mut entries: Vec<SingularInterface>) -> Self {
        entries.sort_by_key(|e| e.index);
        Self { entries }
    }

    /// Registers every jump of `geometry` that falls inside the grid. A jump sitting
    /// on a node belongs to the interface right of that node (the node takes the
    /// left value); otherwise it belongs to the interface containing it.
    pub fn locate(grid: &Grid, geometry: &Geometry) -> Self {
        let entries = geometry
            .discontinuities()
            .iter()
            .filter_map(|&x_d| {
                let r = (x_d - grid.x_start()) / grid.dx();
                let nearest = r.round();
                let index = if (r - nearest).abs() <= 1e-9 * nearest.abs().max(1.0) {
                    nearest
                } else {
                    r.floor()
                } as isize;
                (index >= 0 && index < grid.last()).then_some(SingularInterface {
                    index,
                    position: x_d,
                })
            })
            .collect();
        Self::new(entries)
    }

    pub fn interfaces(&self) -> &[SingularInterface] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Checks the separation of successive jumps (more than `2s` nodes) and that
    /// every reduced-rule cell stays inside the grid.
    pub fn validate(&self, steps: usize, grid: &Grid) -> Result<()> {
        for pair in self.entries.windows(2) {
            let gap = pair[1].index - pair[0].index;
            if gap <= 2 * steps as isize {
                return Err(Error::Config(format!(
                    "jumps at x = {} and x = {} are {gap} nodes apart; at least {} are needed",
                    pair[0].position,
                    pair[1].position,
                    2 * steps + 1
                )));
            }
        }
        for e in &self.entries {
            if e.index < 0 || e.index + 1 > grid.last() {
                return Err(Error::Config(format!(
                    "jump at x = {} lies outside the grid interior",
                    e.position
                )));
            }
        }
        Ok(())
    }
}

/// Quadrature used on one cell `[x_j, x_{j+1}]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellRule {
    /// Full rule on nodes `j+1−s..j+1`.
    Standard,
    /// Linearized jump `S̃ [[H]]`.
    Singular,
    /// `r`-step rule on nodes `j+1−r..j+1`, right after a jump.
    Reduced(usize),
}

/// Assignment of quadrature rules to cells around registered jumps.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraturePlan {
    rule: MultiStepRule,
    registry: SingularityRegistry,
    reduced: Vec<Vec<f64>>,
}

impl QuadraturePlan {
    pub fn new(rule: MultiStepRule, registry: SingularityRegistry) -> Self {
        let reduced = (0..rule.steps())
            .map(|r| if r == 0 { Vec::new() } else { rule.reduced(r) })
            .collect();
        Self {
            rule,
            registry,
            reduced,
        }
    }

    pub fn rule(&self) -> &MultiStepRule {
        &self.rule
    }

    pub fn registry(&self) -> &SingularityRegistry {
        &self.registry
    }

    pub fn steps(&self) -> usize {
        self.rule.steps()
    }

    pub fn cell(&self, j: isize) -> CellRule {
        let s = self.steps() as isize;
        for e in self.registry.interfaces() {
            if j == e.index {
                return CellRule::Singular;
            }
            if j > e.index && j < e.index + s {
                return CellRule::Reduced((j - e.index) as usize);
            }
        }
        CellRule::Standard
    }

    /// First node and weights of a non-singular cell.
    pub fn stencil(&self, j: isize) -> Option<(isize, &[f64])> {
        match self.cell(j) {
            CellRule::Standard => Some((j + 1 - self.steps() as isize, self.rule.weights())),
            CellRule::Reduced(r) => Some((j + 1 - r as isize, &self.reduced[r])),
            CellRule::Singular => None,
        }
    }
}

/// Source primitives and modified fluxes on a contiguous node range containing node 0.
#[derive(Debug, Clone, PartialEq)]
pub struct GlobalFlux<const M: usize> {
    pub primitives: NodeField<[f64; M]>,
    pub modified: NodeField<[f64; M]>,
}

/// `S̃(U_ℓ, U_{ℓ+1}) [[H]]`.
pub fn singular_cell_integral<L: BalanceLaw<M> + ?Sized, const M: usize>(
    model: &L,
    ul: &[f64; M],
    ur: &[f64; M],
    jump: f64,
) -> Result<[f64; M]> {
    let s = model.singular_source(ul, ur)?;
    Ok(s.map(|v| v * jump))
}

/// `Δx Σ_m β_m [S(U_n) H_x(x_n) + s(U_n, x_n)]` over the weights of `stencil`.
fn weighted_source<L: BalanceLaw<M> + ?Sized, const M: usize>(
    model: &L,
    states: &NodeField<[f64; M]>,
    grid: &Grid,
    first: isize,
    weights: &[f64],
    t: f64,
) -> Result<[f64; M]> {
    let geometry = model.geometry();
    let mut acc = [0.0; M];
    for (m, &w) in weights.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        let n = first + m as isize;
        let u = states.at(n)?;
        let x = grid.node(n);
        let hx = geometry.slope(x, t);
        let sc = model.source_coeff(u);
        let ps = model.pointwise_source(u, x);
        for c in 0..M {
            acc[c] += w * (sc[c] * hx + ps[c]);
        }
    }
    Ok(acc.map(|v| v * grid.dx()))
}

/// `𝓘_j(U)` following the plan: full, reduced or singular rule.
pub fn cell_source_integral<L: BalanceLaw<M> + ?Sized, const M: usize>(
    model: &L,
    plan: &QuadraturePlan,
    states: &NodeField<[f64; M]>,
    grid: &Grid,
    j: isize,
    t: f64,
) -> Result<[f64; M]> {
    match plan.stencil(j) {
        Some((first, weights)) => weighted_source(model, states, grid, first, weights, t),
        None => {
            let geometry = model.geometry();
            let jump = geometry.value(grid.node(j + 1), t) - geometry.value(grid.node(j), t);
            singular_cell_integral(model, states.at(j)?, states.at(j + 1)?, jump)
                .map_err(|e| e.at_node(j))
        }
    }
}

/// Quadrature-consistent depth at rest `H̃` on `first..=last`, with `H̃_0 = H(x_0)`.
pub fn accumulate_bathymetry(
    geometry: &Geometry,
    grid: &Grid,
    plan: &QuadraturePlan,
    first: isize,
    last: isize,
    t: f64,
) -> NodeField<f64> {
    let dx = grid.dx();
    let increment = |j: isize| match plan.stencil(j) {
        Some((start, weights)) => {
            let sum: f64 = weights
                .iter()
                .enumerate()
                .filter(|(_, w)| **w != 0.0)
                .map(|(m, w)| w * geometry.slope(grid.node(start + m as isize), t))
                .sum();
            dx * sum
        }
        None => geometry.value(grid.node(j + 1), t) - geometry.value(grid.node(j), t),
    };
    let mut out = NodeField::filled(first, (last - first + 1) as usize, 0.0);
    out[0] = geometry.value(grid.node(0), t);
    for j in 0..last {
        out[j + 1] = out[j] + increment(j);
    }
    for j in (first..0).rev() {
        out[j] = out[j + 1] - increment(j);
    }
    out
}

/// Momentum component of `𝓘_j` from `∫ g h H_x = ∫ g η H_x + (g/2)[[H²]]` with
/// `η = h − H̃`, which makes lake-at-rest data an exact discrete equilibrium.
pub fn water_at_rest_integral<L: BalanceLaw<M> + ?Sized, const M: usize>(
    model: &L,
    plan: &QuadraturePlan,
    states: &NodeField<[f64; M]>,
    bathymetry: &NodeField<f64>,
    grid: &Grid,
    j: isize,
    t: f64,
) -> Result<f64> {
    let g = model.hydrostatic().ok_or_else(|| {
        Error::Config(format!("{} has no water-at-rest formulation", model.name()))
    })?;
    let (hl, hr) = (*bathymetry.at(j)?, *bathymetry.at(j + 1)?);
    let square_jump = 0.5 * g * (hr * hr - hl * hl);
    match plan.stencil(j) {
        Some((first, weights)) => {
            let geometry = model.geometry();
            let mut acc = 0.0;
            for (m, &w) in weights.iter().enumerate() {
                if w == 0.0 {
                    continue;
                }
                let n = first + m as isize;
                let u = states.at(n)?;
                let x = grid.node(n);
                let eta = u[0] - bathymetry.at(n)?;
                acc += w * (g * eta * geometry.slope(x, t) + model.pointwise_source(u, x)[1]);
            }
            Ok(grid.dx() * acc + square_jump)
        }
        None => {
            let eta = model
                .at_rest_surface(states.at(j)?, states.at(j + 1)?, hl, hr)
                .map_err(|e| e.at_node(j))?;
            Ok(g * eta * (hr - hl) + square_jump)
        }
    }
}

/// Builds `R` and `𝓕` on the widest range the node data supports: every cell
/// `j` with nodes `j+1−s..j+1` available.
///
/// With `bathymetry` the momentum integrals use the water-at-rest form.
pub fn build_global_flux<L: BalanceLaw<M> + ?Sized, const M: usize>(
    model: &L,
    plan: &QuadraturePlan,
    states: &NodeField<[f64; M]>,
    grid: &Grid,
    t: f64,
    bathymetry: Option<&NodeField<f64>>,
) -> Result<GlobalFlux<M>> {
    let s = plan.steps() as isize;
    let lo = states.first() + s - 1;
    let hi = states.last();
    if lo > 0 || hi < 1 {
        return Err(Error::StencilOutOfRange {
            index: if lo > 0 { states.first() } else { hi },
        });
    }
    if bathymetry.is_some() && M < 2 {
        return Err(Error::Config("water-at-rest quadrature needs a momentum component".into()));
    }
    for j in states.first()..=hi {
        model.check_state(&states[j]).map_err(|e| e.at_node(j))?;
    }
    let sourced = model.sourced_components();
    let integral = |j: isize| -> Result<[f64; M]> {
        let mut v = cell_source_integral(model, plan, states, grid, j, t)?;
        if let Some(b) = bathymetry {
            v[1] = water_at_rest_integral(model, plan, states, b, grid, j, t)?;
        }
        for c in 0..M {
            if !sourced[c] {
                v[c] = 0.0;
            }
        }
        Ok(v)
    };

    let len = (hi - lo + 1) as usize;
    let mut r = NodeField::filled(lo, len, [0.0; M]);
    for j in 0..hi {
        let i = integral(j)?;
        let prev = r[j];
        r[j + 1] = std::array::from_fn(|c| prev[c] + i[c]);
    }
    for j in (lo..0).rev() {
        let i = integral(j)?;
        let next = r[j + 1];
        r[j] = std::array::from_fn(|c| next[c] - i[c]);
    }
    let modified = NodeField::from_vec(
        lo,
        (lo..=hi)
            .map(|j| {
                let f = model.flux(&states[j]);
                let rj = r[j];
                std::array::from_fn(|c| f[c] - rj[c])
            })
            .collect(),
    );
    Ok(GlobalFlux {
        primitives: r,
        modified,
    })
}
