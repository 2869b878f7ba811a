pub mod cases;
pub mod error;
pub mod global_flux;
pub mod grid;
pub mod integrator;
pub mod model;
pub mod multistep;
pub mod steady;
pub mod study;
pub mod weno;

pub use error::{Error, Result};
pub use grid::{Grid, NodeField, State};
pub use model::{
    BalanceLaw, BurgersModel, BurgersSource, Eigensystem, FluxBranch, FrictionLaw, Geometry,
    ShallowWaterModel,
};
pub use cases::{case, CaseSpec, SchemeId, CASE_IDS};
pub use global_flux::{QuadraturePlan, SingularityRegistry};
pub use integrator::{BoundaryPolicy, SchemeConfig, SchemeKind, SidePolicy, Solver};
pub use multistep::{multistep_weights, Family, MultiStepRule};
pub use steady::{steady_sweep, steady_sweep_extended, BranchPlan, SeedSource, SteadyProblem};
pub use study::{
    convergence_study, l1_error, observed_order, perturbation_study, run_case, RunOptions,
    RunResult,
};
pub use weno::{Weno, WenoOrder};
