//! Registry of benchmark cases and scheme identifiers.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::integrator::{BoundaryPolicy, SchemeKind, SidePolicy, TimeProfile};
use crate::model::{BurgersModel, FluxBranch, FrictionLaw, Geometry, ShallowWaterModel};
use crate::multistep::{multistep_weights, Family, MultiStepRule};
use crate::steady::exact::{self, FrictionProfile};
use crate::steady::{BranchPlan, Profile, SeedSource};
use crate::weno::WenoOrder;

/// `weno{p}gf-{ab|am}{q}` or `weno{p}-nwb`.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeId {
    pub weno: WenoOrder,
    pub kind: SchemeKind,
}

impl SchemeId {
    pub fn rule(&self) -> Option<&MultiStepRule> {
        match &self.kind {
            SchemeKind::GlobalFlux(rule) => Some(rule),
            SchemeKind::NonWellBalanced => None,
        }
    }

    pub fn is_well_balanced(&self) -> bool {
        self.rule().is_some()
    }

    /// Every identifier the parser accepts.
    pub fn all() -> Vec<SchemeId> {
        let mut out = Vec::new();
        for p in [3, 5, 7] {
            let weno = WenoOrder::new(p).unwrap();
            for family in [Family::AdamsBashforth, Family::AdamsMoulton] {
                for q in [4, 6, 8] {
                    out.push(SchemeId {
                        weno,
                        kind: SchemeKind::GlobalFlux(multistep_weights(family, q).unwrap()),
                    });
                }
            }
            out.push(SchemeId {
                weno,
                kind: SchemeKind::NonWellBalanced,
            });
        }
        out
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            SchemeKind::GlobalFlux(rule) => write!(f, "weno{}gf-{rule}", self.weno.p()),
            SchemeKind::NonWellBalanced => write!(f, "weno{}-nwb", self.weno.p()),
        }
    }
}

impl FromStr for SchemeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::Unknown {
            kind: "scheme",
            id: s.to_string(),
            known: "weno{3|5|7}gf-{ab|am}{4|6|8}, weno{3|5|7}-nwb".into(),
        };
        let rest = s.strip_prefix("weno").ok_or_else(unknown)?;
        let p: usize = rest.get(..1).and_then(|d| d.parse().ok()).ok_or_else(unknown)?;
        let weno = WenoOrder::new(p).map_err(|_| unknown())?;
        let kind = match &rest[1..] {
            "-nwb" => SchemeKind::NonWellBalanced,
            tail => {
                let rule = tail.strip_prefix("gf-").ok_or_else(unknown)?;
                SchemeKind::GlobalFlux(rule.parse().map_err(|_| unknown())?)
            }
        };
        Ok(SchemeId { weno, kind })
    }
}

/// Whether a case runs to a fixed time or to a discrete steady state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mode {
    Transient { t_end: f64 },
    Steady,
}

/// Initial data before any perturbation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Initial {
    /// The exact solution at `t = 0`.
    Exact,
    /// The scheme's own discrete steady state: the sweep for global-flux schemes,
    /// the exact (or, lacking one, a high-order sweep) profile otherwise.
    Steady,
    /// Water at rest at level `η`, built on the scheme's depth at rest.
    Lake { level: f64 },
}

/// Perturbation added to the depth (shallow water) or the state (scalar).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Perturbation {
    /// `amplitude` on `[a, b]`.
    Box { a: f64, b: f64, amplitude: f64 },
    /// `amplitude · e^{−rate (x − center)²}`.
    Gaussian { center: f64, rate: f64, amplitude: f64 },
    /// `amplitude` on `x < edge`.
    Step { edge: f64, amplitude: f64 },
}

impl Perturbation {
    pub fn amplitude(&self) -> f64 {
        match *self {
            Perturbation::Box { amplitude, .. }
            | Perturbation::Gaussian { amplitude, .. }
            | Perturbation::Step { amplitude, .. } => amplitude,
        }
    }

    pub fn with_amplitude(self, amplitude: f64) -> Self {
        match self {
            Perturbation::Box { a, b, .. } => Perturbation::Box { a, b, amplitude },
            Perturbation::Gaussian { center, rate, .. } => Perturbation::Gaussian {
                center,
                rate,
                amplitude,
            },
            Perturbation::Step { edge, .. } => Perturbation::Step { edge, amplitude },
        }
    }

    pub fn at(&self, x: f64) -> f64 {
        match *self {
            Perturbation::Box { a, b, amplitude } => {
                if (a..=b).contains(&x) {
                    amplitude
                } else {
                    0.0
                }
            }
            Perturbation::Gaussian {
                center,
                rate,
                amplitude,
            } => amplitude * (-rate * (x - center).powi(2)).exp(),
            Perturbation::Step { edge, amplitude } => {
                if x < edge {
                    amplitude
                } else {
                    0.0
                }
            }
        }
    }
}

/// What the L1 error of a run is measured against.
#[derive(Debug, Clone, PartialEq)]
pub enum Reference {
    /// The exact solution at the final time.
    Exact,
    /// The unperturbed initial data (preservation tests).
    Initial,
    /// The same case with another scheme on a grid `factor` times finer.
    Scheme { scheme: String, factor: usize },
}

/// Perturbation-study defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationSpec {
    pub perturbation: Perturbation,
    pub t_end: f64,
    pub n: usize,
    pub reference_scheme: String,
    pub reference_factor: usize,
}

/// Steady-sweep ingredients.
#[derive(Clone)]
pub struct SweepRecipe<const M: usize> {
    pub seeds: SeedSource<M>,
    pub branch: BranchPlan,
}

/// Fully specified case for one model type.
#[derive(Clone)]
pub struct CaseSetup<L, const M: usize> {
    pub model: L,
    pub domain: (f64, f64),
    pub mode: Mode,
    pub initial: Initial,
    pub exact: Option<TimeProfile<M>>,
    pub sweep: Option<SweepRecipe<M>>,
    pub boundary: BoundaryPolicy<M>,
    /// CFL number replacing the solver default.
    pub cfl: Option<f64>,
    /// Boundary for steady-mode runs of every scheme, replacing the frozen sweep ghosts.
    pub steady_boundary: Option<BoundaryPolicy<M>>,
    /// Replace the right boundary with a subcritical outlet at the initial depth.
    pub outlet_at_initial: bool,
    /// Perturbation applied to every run of the case.
    pub perturbation: Option<Perturbation>,
    pub reference: Reference,
}

/// A registered case of either model type.
#[derive(Clone)]
pub enum CaseModel {
    Scalar(CaseSetup<BurgersModel, 1>),
    ShallowWater(CaseSetup<ShallowWaterModel, 2>),
}

/// Registry entry.
#[derive(Clone)]
pub struct CaseSpec {
    pub id: &'static str,
    pub description: &'static str,
    pub default_n: usize,
    pub n_list: Vec<usize>,
    pub default_scheme: &'static str,
    pub perturbation: Option<PerturbationSpec>,
    pub setup: CaseModel,
}

impl CaseSpec {
    pub fn mode(&self) -> Mode {
        match &self.setup {
            CaseModel::Scalar(s) => s.mode,
            CaseModel::ShallowWater(s) => s.mode,
        }
    }

    pub fn components(&self) -> usize {
        match &self.setup {
            CaseModel::Scalar(_) => 1,
            CaseModel::ShallowWater(_) => 2,
        }
    }
}

pub const CASE_IDS: [&str; 17] = [
    "burgers-mms",
    "burgers-smooth-steady",
    "burgers-oscillatory",
    "burgers-two-discontinuities",
    "burgers-one-discontinuity-perturbed",
    "swe-lake-at-rest",
    "swe-lake-perturbation-small",
    "swe-lake-riemann",
    "swe-subcritical",
    "swe-subcritical-reversed",
    "swe-supercritical",
    "swe-supercritical-reversed",
    "swe-transcritical",
    "swe-friction-khq-super",
    "swe-friction-khq-sub",
    "swe-friction-manning-super",
    "swe-friction-manning-sub",
];

/// Looks up a case by id.
pub fn case(id: &str) -> Result<CaseSpec> {
    let spec = match id {
        "burgers-mms" => burgers_mms(),
        "burgers-smooth-steady" => burgers_smooth(),
        "burgers-oscillatory" => burgers_oscillatory(),
        "burgers-two-discontinuities" => burgers_two_jumps(),
        "burgers-one-discontinuity-perturbed" => burgers_one_jump(),
        "swe-lake-at-rest" => lake("swe-lake-at-rest", None),
        "swe-lake-perturbation-small" => lake(
            "swe-lake-perturbation-small",
            Some(Perturbation::Box {
                a: 7.5,
                b: 9.5,
                amplitude: 1e-4,
            }),
        ),
        "swe-lake-riemann" => lake(
            "swe-lake-riemann",
            Some(Perturbation::Step {
                edge: 12.0,
                amplitude: 1.0,
            }),
        ),
        "swe-subcritical" => moving("swe-subcritical", 4.42, FluxBranch::Subcritical),
        "swe-subcritical-reversed" => {
            moving("swe-subcritical-reversed", -4.42, FluxBranch::Subcritical)
        }
        "swe-supercritical" => moving("swe-supercritical", 24.0, FluxBranch::Supercritical),
        "swe-supercritical-reversed" => {
            moving("swe-supercritical-reversed", -24.0, FluxBranch::Supercritical)
        }
        "swe-transcritical" => transcritical(),
        "swe-friction-khq-super" => friction_khq(true),
        "swe-friction-khq-sub" => friction_khq(false),
        "swe-friction-manning-super" => manning(true),
        "swe-friction-manning-sub" => manning(false),
        _ => {
            return Err(Error::Unknown {
                kind: "case",
                id: id.to_string(),
                known: CASE_IDS.join(", "),
            })
        }
    };
    Ok(spec)
}

pub fn all_cases() -> Vec<CaseSpec> {
    CASE_IDS.iter().map(|id| case(id).unwrap()).collect()
}

fn dyadic(first: usize, count: usize) -> Vec<usize> {
    (0..count).map(|i| first << i).collect()
}

fn exact_stationary<const M: usize>(profile: Profile<M>) -> TimeProfile<M> {
    Arc::new(move |x, _t| profile(x).expect("exact profile defined on the ghost band"))
}

fn scalar_steady(
    p: u32,
    geometry: Geometry,
    mode: Mode,
    initial: Initial,
) -> CaseSetup<BurgersModel, 1> {
    let profile = exact::burgers(p, 1.0, geometry.clone());
    let exact = exact_stationary(profile.clone());
    CaseSetup {
        model: BurgersModel::new(p, geometry).unwrap(),
        domain: (-1.0, 1.0),
        mode,
        initial,
        exact: Some(exact.clone()),
        sweep: Some(SweepRecipe {
            seeds: SeedSource::Exact(profile),
            branch: BranchPlan::Fixed(FluxBranch::ScalarPositive),
        }),
        boundary: BoundaryPolicy::both(SidePolicy::Exact(exact)),
        cfl: None,
        steady_boundary: None,
        outlet_at_initial: false,
        perturbation: None,
        reference: Reference::Exact,
    }
}

fn burgers_mms() -> CaseSpec {
    let (x0, c) = (5.0, 1.0);
    let geometry = Geometry::new(
        move |x, t| (-(x - x0 - c * t).powi(2)).exp(),
        move |x, t| {
            let d = x - x0 - c * t;
            -2.0 * d * (-d * d).exp()
        },
    );
    let g = geometry.clone();
    let exact: TimeProfile<1> = Arc::new(move |x, t| [g.value(x, t)]);
    CaseSpec {
        id: "burgers-mms",
        description: "traveling Gaussian U = H(x − t) with S(U) = U − 1 on [0, 15], t = 2",
        default_n: 120,
        n_list: vec![60, 120, 240, 480, 960],
        default_scheme: "weno5gf-ab6",
        perturbation: None,
        setup: CaseModel::Scalar(CaseSetup {
            model: BurgersModel::manufactured(c, geometry),
            domain: (0.0, 15.0),
            mode: Mode::Transient { t_end: 2.0 },
            initial: Initial::Exact,
            exact: Some(exact.clone()),
            sweep: None,
            boundary: BoundaryPolicy::both(SidePolicy::Exact(exact)),
            // Small enough that the RK3 error stays below the spatial one up to N = 960.
            cfl: Some(0.05),
            steady_boundary: None,
            outlet_at_initial: false,
            perturbation: None,
            reference: Reference::Exact,
        }),
    }
}

fn burgers_smooth() -> CaseSpec {
    CaseSpec {
        id: "burgers-smooth-steady",
        description: "S(U) = U², H = x on [−1, 1]; discrete steady state against U* = e^x",
        default_n: 80,
        n_list: dyadic(20, 5),
        default_scheme: "weno3gf-am4",
        perturbation: None,
        setup: CaseModel::Scalar(scalar_steady(
            2,
            Geometry::linear(1.0, 0.0),
            Mode::Steady,
            Initial::Steady,
        )),
    }
}

fn burgers_oscillatory() -> CaseSpec {
    let geometry = Geometry::stationary(
        |x| x + 0.1 * (100.0 * x).sin(),
        |x| 1.0 + 10.0 * (100.0 * x).cos(),
    );
    CaseSpec {
        id: "burgers-oscillatory",
        description: "S(U) = U², H = x + 0.1 sin(100x) on [−1, 1]; exact data run to t = 1",
        default_n: 100,
        n_list: vec![100, 200, 400, 800],
        default_scheme: "weno3gf-am4",
        perturbation: Some(PerturbationSpec {
            perturbation: Perturbation::Box {
                a: -0.7,
                b: -0.5,
                amplitude: 0.2,
            },
            t_end: 0.7,
            n: 150,
            reference_scheme: "weno5gf-am8".into(),
            reference_factor: 20,
        }),
        setup: CaseModel::Scalar(scalar_steady(
            2,
            geometry,
            Mode::Transient { t_end: 1.0 },
            Initial::Exact,
        )),
    }
}

fn piecewise(pieces: Vec<(f64, f64)>, jumps: Vec<f64>) -> Geometry {
    // `pieces[i] = (offset, slope)` applies on the i-th interval between jumps.
    let locate = {
        let jumps = jumps.clone();
        move |x: f64| jumps.iter().filter(|&&d| !Geometry::left_of(x, d)).count()
    };
    let (p1, l1) = (pieces.clone(), locate.clone());
    Geometry::new(
        move |x, _| {
            let (a, b) = p1[l1(x)];
            a + b * x
        },
        move |x, _| pieces[locate(x)].1,
    )
    .with_discontinuities(jumps)
}

fn burgers_two_jumps() -> CaseSpec {
    let geometry = piecewise(vec![(0.0, 0.1), (0.5, 1.0), (0.9, 1.0)], vec![0.0, 0.5]);
    CaseSpec {
        id: "burgers-two-discontinuities",
        description: "S(U) = U², H with jumps at x = 0 (node) and x = 0.5 (between nodes); t = 0.2",
        default_n: 98,
        n_list: vec![98, 196, 392],
        default_scheme: "weno3gf-am4",
        perturbation: None,
        setup: CaseModel::Scalar(scalar_steady(
            2,
            geometry,
            Mode::Transient { t_end: 0.2 },
            Initial::Exact,
        )),
    }
}

fn burgers_one_jump() -> CaseSpec {
    let geometry = piecewise(vec![(0.0, 0.1), (0.9, 1.0)], vec![0.0]);
    let pulse = Perturbation::Gaussian {
        center: -0.5,
        rate: 200.0,
        amplitude: 0.3,
    };
    let mut setup = scalar_steady(2, geometry, Mode::Transient { t_end: 0.3 }, Initial::Exact);
    setup.perturbation = Some(pulse);
    setup.reference = Reference::Scheme {
        scheme: "weno5-nwb".into(),
        factor: 20,
    };
    CaseSpec {
        id: "burgers-one-discontinuity-perturbed",
        description: "S(U) = U², one jump of H at x = 0, Gaussian pulse of 0.3 at x = −0.5; t = 0.3",
        default_n: 100,
        n_list: vec![100, 200, 400],
        default_scheme: "weno3gf-am4",
        perturbation: Some(PerturbationSpec {
            perturbation: pulse,
            t_end: 0.3,
            n: 100,
            reference_scheme: "weno5-nwb".into(),
            reference_factor: 20,
        }),
        setup: CaseModel::Scalar(setup),
    }
}

/// `0.05 sin(x − 12.5) e^{1 − (x − 12.5)²}` and its slope.
fn bump(x: f64) -> f64 {
    let d = x - 12.5;
    0.05 * d.sin() * (1.0 - d * d).exp()
}

fn bump_slope(x: f64) -> f64 {
    let d = x - 12.5;
    0.05 * (1.0 - d * d).exp() * (d.cos() - 2.0 * d * d.sin())
}

fn lake(id: &'static str, perturbation: Option<Perturbation>) -> CaseSpec {
    // Depth at rest = −(bump elevation) with a 0.1 drop of the bottom beyond x = 14.
    let geometry = Geometry::stationary(
        |x| -bump(x) + if x > 14.0 { 0.1 } else { 0.0 },
        |x| -bump_slope(x),
    )
    .with_discontinuities(vec![14.0]);
    let g = geometry.clone();
    let exact: TimeProfile<2> = Arc::new(move |x, _| [2.0 + g.value(x, 0.0), 0.0]);
    let (mode, description, n_list, reference) = match perturbation {
        None => (
            Mode::Transient { t_end: 2.0 },
            "water at rest over a bump with a bottom step at x = 14; t = 2",
            dyadic(25, 5),
            Reference::Initial,
        ),
        Some(Perturbation::Box { .. }) => (
            Mode::Transient { t_end: 1.0 },
            "water at rest plus 1e-4 on [7.5, 9.5]; t = 1",
            vec![100, 200, 400],
            Reference::Scheme {
                scheme: "weno7gf-am8".into(),
                factor: 5,
            },
        ),
        Some(_) => (
            Mode::Transient { t_end: 1.0 },
            "water at rest plus 1 m left of x = 12; t = 1",
            vec![100, 200, 400],
            Reference::Scheme {
                scheme: "weno7gf-am8".into(),
                factor: 5,
            },
        ),
    };
    let small = Perturbation::Box {
        a: 7.5,
        b: 9.5,
        amplitude: 1e-4,
    };
    CaseSpec {
        id,
        description,
        default_n: 100,
        n_list,
        default_scheme: "weno3gf-am4",
        perturbation: Some(PerturbationSpec {
            perturbation: perturbation.unwrap_or(small),
            t_end: 1.0,
            n: 100,
            reference_scheme: "weno7gf-am8".into(),
            reference_factor: 5,
        }),
        setup: CaseModel::ShallowWater(CaseSetup {
            model: ShallowWaterModel::frictionless(geometry),
            domain: (0.0, 25.0),
            mode,
            initial: Initial::Lake { level: 2.0 },
            exact: Some(exact),
            sweep: None,
            boundary: BoundaryPolicy {
                left: SidePolicy::SubcriticalInlet { q: 0.0 },
                right: SidePolicy::Extrapolate,
            },
            cfl: None,
            steady_boundary: None,
            outlet_at_initial: true,
            perturbation,
            reference,
        }),
    }
}

/// Location of the minimum of [`bump`], from `bump_slope = 0` on `(11, 12.5)`.
fn bump_minimum() -> f64 {
    let (mut a, mut b) = (11.0, 12.5);
    while b - a > 1e-15 * b {
        let m = 0.5 * (a + b);
        if bump_slope(m) < 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

fn smooth_bump() -> Geometry {
    Geometry::stationary(bump, bump_slope)
}

fn moving(id: &'static str, q: f64, branch: FluxBranch) -> CaseSpec {
    let model = ShallowWaterModel::frictionless(smooth_bump());
    let subcritical = branch == FluxBranch::Subcritical;
    let forward = q > 0.0;
    let plan = BranchPlan::Fixed(branch);
    // Data are given at the inflow end, where the depth is 2.
    let x_in = if forward { 0.0 } else { 25.0 };
    let profile = exact::bernoulli_through(&model, x_in, 2.0, q, plan);
    let h_out = profile(if forward { 25.0 } else { 0.0 }).unwrap()[0];
    let inlet = if subcritical {
        SidePolicy::SubcriticalInlet { q }
    } else {
        SidePolicy::SupercriticalInlet { h: 2.0, q }
    };
    let outlet = if subcritical {
        SidePolicy::SubcriticalOutlet { h: h_out }
    } else {
        SidePolicy::Extrapolate
    };
    let boundary = if forward {
        BoundaryPolicy {
            left: inlet,
            right: outlet,
        }
    } else {
        BoundaryPolicy {
            left: outlet,
            right: inlet,
        }
    };
    let description = match (subcritical, forward) {
        (true, true) => "subcritical flow over a smooth bump, q = 4.42, h(0) = 2",
        (true, false) => "subcritical flow over a smooth bump, q = −4.42, h(25) = 2",
        (false, true) => "supercritical flow over a smooth bump, q = 24, h(0) = 2",
        (false, false) => "supercritical flow over a smooth bump, q = −24, h(25) = 2",
    };
    CaseSpec {
        id,
        description,
        default_n: 100,
        n_list: dyadic(25, 5),
        default_scheme: "weno3gf-am4",
        perturbation: Some(PerturbationSpec {
            perturbation: Perturbation::Box {
                a: 7.5,
                b: 9.5,
                amplitude: 1e-4,
            },
            t_end: 1.0,
            n: 100,
            reference_scheme: "weno7gf-am8".into(),
            reference_factor: 5,
        }),
        setup: CaseModel::ShallowWater(CaseSetup {
            model,
            domain: (0.0, 25.0),
            mode: Mode::Steady,
            initial: Initial::Steady,
            exact: Some(exact_stationary(profile.clone())),
            sweep: Some(SweepRecipe {
                seeds: SeedSource::Exact(profile),
                branch: plan,
            }),
            boundary,
            cfl: None,
            steady_boundary: None,
            outlet_at_initial: false,
            perturbation: None,
            reference: Reference::Exact,
        }),
    }
}

fn transcritical() -> CaseSpec {
    // Critical at the crest of the bottom, where the depth at rest is smallest.
    let crest = bump_minimum();
    let model = ShallowWaterModel::frictionless(smooth_bump());
    let q = 1.53;
    let profile = exact::transcritical(&model, q, crest);
    let plan = BranchPlan::Switch {
        at: crest,
        before: FluxBranch::Subcritical,
        after: FluxBranch::Supercritical,
    };
    CaseSpec {
        id: "swe-transcritical",
        description: "transcritical flow over the smooth bump, q = 1.53, critical at the bottom crest",
        default_n: 100,
        n_list: dyadic(50, 4),
        default_scheme: "weno5gf-ab4",
        perturbation: Some(PerturbationSpec {
            perturbation: Perturbation::Box {
                a: 5.5,
                b: 7.5,
                amplitude: 1e-4,
            },
            t_end: 0.7,
            n: 100,
            reference_scheme: "weno7gf-am8".into(),
            reference_factor: 10,
        }),
        setup: CaseModel::ShallowWater(CaseSetup {
            model,
            domain: (0.0, 25.0),
            mode: Mode::Steady,
            initial: Initial::Steady,
            exact: Some(exact_stationary(profile.clone())),
            sweep: Some(SweepRecipe {
                seeds: SeedSource::Exact(profile),
                branch: plan,
            }),
            boundary: BoundaryPolicy {
                left: SidePolicy::SubcriticalInlet { q },
                right: SidePolicy::Extrapolate,
            },
            cfl: None,
            steady_boundary: None,
            outlet_at_initial: false,
            perturbation: None,
            reference: Reference::Exact,
        }),
    }
}

fn friction_khq(supercritical: bool) -> CaseSpec {
    let params = if supercritical {
        FrictionProfile {
            h0: 1.0,
            q0: 1.5,
            a: 2.5,
            b: 0.5,
            c: 2.0,
            k: 0.3,
            g: 1.0,
            x0: 0.0,
        }
    } else {
        FrictionProfile {
            h0: 1.0,
            q0: 0.3,
            a: 2.5,
            b: 0.25,
            c: 0.5,
            k: 0.5,
            g: 1.0,
            x0: 0.0,
        }
    };
    let model = ShallowWaterModel::new(
        params.g,
        FrictionLaw::QuadraticDepth { k: params.k },
        params.geometry(),
    )
    .unwrap();
    let profile = params.profile();
    let (branch, boundary) = if supercritical {
        (
            FluxBranch::Supercritical,
            BoundaryPolicy {
                left: SidePolicy::SupercriticalInlet {
                    h: params.h0,
                    q: params.q0,
                },
                right: SidePolicy::Extrapolate,
            },
        )
    } else {
        (
            FluxBranch::Subcritical,
            BoundaryPolicy {
                left: SidePolicy::SubcriticalInlet { q: params.q0 },
                right: SidePolicy::SubcriticalOutlet {
                    h: params.depth(1.0),
                },
            },
        )
    };
    CaseSpec {
        id: if supercritical {
            "swe-friction-khq-super"
        } else {
            "swe-friction-khq-sub"
        },
        description: if supercritical {
            "friction κ = k h|q|, analytic supercritical steady state on [0, 1], g = 1"
        } else {
            "friction κ = k h|q|, analytic subcritical steady state on [0, 1], g = 1"
        },
        default_n: 80,
        n_list: dyadic(20, 5),
        // Eighth order needs N ≥ 40 to stay subcritical near the outflow.
        default_scheme: if supercritical { "weno3gf-am8" } else { "weno3gf-am4" },
        perturbation: Some(PerturbationSpec {
            perturbation: Perturbation::Box {
                a: 0.1,
                b: 0.2,
                amplitude: 1e-4,
            },
            t_end: 0.08,
            n: 100,
            reference_scheme: "weno5gf-am8".into(),
            reference_factor: 20,
        }),
        setup: CaseModel::ShallowWater(CaseSetup {
            model,
            domain: (0.0, 1.0),
            mode: Mode::Steady,
            initial: Initial::Steady,
            exact: Some(exact_stationary(profile.clone())),
            sweep: Some(SweepRecipe {
                seeds: SeedSource::Exact(profile.clone()),
                branch: BranchPlan::Fixed(branch),
            }),
            boundary,
            cfl: None,
            // The analytic solution only pins (h, q)(0); steady runs take ghost data from it.
            steady_boundary: Some(BoundaryPolicy::both(SidePolicy::Exact(exact_stationary(
                profile.clone(),
            )))),
            outlet_at_initial: false,
            perturbation: None,
            reference: Reference::Exact,
        }),
    }
}

/// Manning coefficient `n = 0.05`, so `k = g n²`.
const MANNING_N: f64 = 0.05;

fn manning(supercritical: bool) -> CaseSpec {
    let g = 9.81;
    let model = ShallowWaterModel::new(g, FrictionLaw::manning(g * MANNING_N * MANNING_N), smooth_bump())
        .unwrap();
    let (q, branch, boundary) = if supercritical {
        (
            24.0,
            FluxBranch::Supercritical,
            BoundaryPolicy {
                left: SidePolicy::SupercriticalInlet { h: 2.0, q: 24.0 },
                right: SidePolicy::Extrapolate,
            },
        )
    } else {
        (
            4.42,
            FluxBranch::Subcritical,
            BoundaryPolicy {
                left: SidePolicy::SubcriticalInlet { q: 4.42 },
                right: SidePolicy::Extrapolate,
            },
        )
    };
    CaseSpec {
        id: if supercritical {
            "swe-friction-manning-super"
        } else {
            "swe-friction-manning-sub"
        },
        description: if supercritical {
            "Manning friction n = 0.05 over the smooth bump, supercritical (h, q)(0) = (2, 24); t = 2"
        } else {
            "Manning friction n = 0.05 over the smooth bump, subcritical (h, q)(0) = (2, 4.42); t = 2"
        },
        default_n: 80,
        // Subcritical explicit sweeps leave their branch over the bump at N = 20.
        n_list: if supercritical { dyadic(20, 5) } else { dyadic(40, 4) },
        default_scheme: "weno5gf-ab6",
        perturbation: Some(PerturbationSpec {
            perturbation: Perturbation::Box {
                a: 7.5,
                b: 9.5,
                amplitude: 1e-4,
            },
            t_end: if supercritical { 0.7 } else { 1.0 },
            n: 100,
            reference_scheme: "weno7gf-ab8".into(),
            reference_factor: 10,
        }),
        setup: CaseModel::ShallowWater(CaseSetup {
            model,
            domain: (0.0, 25.0),
            mode: Mode::Transient { t_end: 2.0 },
            initial: Initial::Steady,
            exact: None,
            sweep: Some(SweepRecipe {
                seeds: SeedSource::Integrate {
                    x0: 0.0,
                    u0: [2.0, q],
                },
                branch: BranchPlan::Fixed(branch),
            }),
            boundary,
            cfl: None,
            steady_boundary: None,
            outlet_at_initial: false,
            perturbation: None,
            reference: Reference::Initial,
        }),
    }
}
