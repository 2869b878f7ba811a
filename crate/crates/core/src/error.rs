use thiserror::Error;

use crate::model::FluxBranch;

/// Failures raised by the model, quadrature, steady-state and time-stepping layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("inadmissible state{}: {detail}", node_suffix(*.node))]
    Domain { node: Option<isize>, detail: String },

    #[error("sonic state: eigenvalues {0} and {1} coincide")]
    SonicState(f64, f64),

    #[error("flux target unreachable on the {branch:?} branch (sonic gap {gap:e}){}", node_suffix(*.node))]
    NoRoot {
        branch: FluxBranch,
        gap: f64,
        node: Option<isize>,
    },

    #[error("inadmissible jump: {0}")]
    InadmissibleJump(String),

    #[error("resonant jump: linearization denominator {0:e} vanishes")]
    ResonantJump(f64),

    #[error("fixed-point iteration stalled at node {node} (residual {residual:e})")]
    NoConvergence { node: isize, residual: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("time step {step}, stage {stage}: {detail}")]
    BlowUp {
        step: usize,
        stage: usize,
        detail: String,
    },

    #[error("no result after {0} time steps")]
    Divergence(usize),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("stencil reaches node {index}, outside the ghost-extended range")]
    StencilOutOfRange { index: isize },

    #[error("unknown {kind} `{id}`; known: {known}")]
    Unknown {
        kind: &'static str,
        id: String,
        known: String,
    },
}

fn node_suffix(node: Option<isize>) -> String {
    match node {
        Some(j) => format!(" at node {j}"),
        None => String::new(),
    }
}

impl Error {
    pub(crate) fn domain(detail: impl Into<String>) -> Self {
        Error::Domain {
            node: None,
            detail: detail.into(),
        }
    }

    /// Attach a node index to errors that carry one.
    pub fn at_node(self, j: isize) -> Self {
        match self {
            Error::Domain { detail, .. } => Error::Domain {
                node: Some(j),
                detail,
            },
            Error::NoRoot { branch, gap, .. } => Error::NoRoot {
                branch,
                gap,
                node: Some(j),
            },
            other => other,
        }
    }

    /// True for usage-type errors (unknown ids, bad configuration, mismatched grids).
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::Config(_) | Error::GridMismatch(_) | Error::Unknown { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
