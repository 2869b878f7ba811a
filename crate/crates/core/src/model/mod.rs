//! Balance laws `U_t + F(U)_x = S(U) H_x + s(U, x)` and the two prototype models.

mod burgers;
mod geometry;
mod shallow_water;

pub use burgers::{BurgersModel, BurgersSource};
pub use geometry::Geometry;
pub use shallow_water::{FrictionLaw, ShallowWaterModel};

use crate::error::Result;

pub type Matrix<const M: usize> = [[f64; M]; M];

/// Regime selecting one root of `F(U) = F*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FluxBranch {
    ScalarPositive,
    ScalarNegative,
    Subcritical,
    Supercritical,
}

impl FluxBranch {
    pub fn opposite(self) -> Self {
        match self {
            FluxBranch::ScalarPositive => FluxBranch::ScalarNegative,
            FluxBranch::ScalarNegative => FluxBranch::ScalarPositive,
            FluxBranch::Subcritical => FluxBranch::Supercritical,
            FluxBranch::Supercritical => FluxBranch::Subcritical,
        }
    }
}

/// Eigenvalues (ascending) with right eigenvectors as columns of `right`
/// and `left = right⁻¹`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigensystem<const M: usize> {
    pub values: [f64; M],
    pub right: Matrix<M>,
    pub left: Matrix<M>,
}

impl<const M: usize> Eigensystem<M> {
    pub fn spectral_radius(&self) -> f64 {
        self.values.iter().fold(0.0, |a, v| a.max(v.abs()))
    }

    /// `R diag(g(λ)) R⁻¹`.
    pub fn apply_diag(&self, g: impl Fn(f64) -> f64) -> Matrix<M> {
        let d = self.values.map(g);
        let mut out = [[0.0; M]; M];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, v) in row.iter_mut().enumerate() {
                *v = (0..M).map(|m| self.right[r][m] * d[m] * self.left[m][c]).sum();
            }
        }
        out
    }

    /// `|J|⁻¹ J = R sign(Λ) R⁻¹` with `|λ|` floored at `1e-8 max(1, ρ)`.
    pub fn sign_matrix(&self) -> Matrix<M> {
        let floor = 1e-8 * self.spectral_radius().max(1.0);
        self.apply_diag(|l| l / l.abs().max(floor))
    }

    /// `R Λ R⁻¹`.
    pub fn reassemble(&self) -> Matrix<M> {
        self.apply_diag(|l| l)
    }
}

pub fn mat_vec<const M: usize>(a: &Matrix<M>, v: &[f64; M]) -> [f64; M] {
    std::array::from_fn(|r| (0..M).map(|c| a[r][c] * v[c]).sum())
}

/// Abstract balance law with `M` components.
///
/// Implementations are pure: every method may be called concurrently.
pub trait BalanceLaw<const M: usize>: Send + Sync {
    fn name(&self) -> &str;

    /// Rejects states outside the admissible set.
    fn check_state(&self, u: &[f64; M]) -> Result<()>;

    fn flux(&self, u: &[f64; M]) -> [f64; M];

    fn jacobian(&self, u: &[f64; M]) -> Matrix<M>;

    /// Eigenstructure of `jacobian(u)`; errors when eigenvalues coincide.
    fn eigen_decomposition(&self, u: &[f64; M]) -> Result<Eigensystem<M>>;

    /// Intermediate matrix `J_{i+1/2}` between two states.
    fn roe_matrix(&self, ul: &[f64; M], ur: &[f64; M]) -> Matrix<M>;

    /// Eigenstructure of `roe_matrix`, without the sonic check.
    fn roe_eigensystem(&self, ul: &[f64; M], ur: &[f64; M]) -> Eigensystem<M>;

    /// `S(U)`.
    fn source_coeff(&self, u: &[f64; M]) -> [f64; M];

    /// `s(U, x)`.
    fn pointwise_source(&self, u: &[f64; M], x: f64) -> [f64; M];

    fn geometry(&self) -> &Geometry;

    /// Components whose source vanishes identically.
    fn sourced_components(&self) -> [bool; M];

    /// Solves `F(U) = target` on `branch`.
    fn invert_flux(&self, target: &[f64; M], branch: FluxBranch) -> Result<[f64; M]>;

    fn branch_of(&self, u: &[f64; M]) -> FluxBranch;

    /// `S̃` such that `[[F]] = S̃ [[H]]` across an admissible jump.
    fn singular_source(&self, ul: &[f64; M], ur: &[f64; M]) -> Result<[f64; M]>;

    /// Right limit connected to `ul` across a jump of `H` from `h_left` to `h_right`.
    fn admissible_jump(&self, ul: &[f64; M], h_left: f64, h_right: f64) -> Result<[f64; M]>;

    /// State where the branches of `invert_flux` meet for the first flux component
    /// of `target`, if the law has one.
    fn sonic_state(&self, _target: &[f64; M]) -> Option<[f64; M]> {
        None
    }

    /// Gravity and momentum index when the source is hydrostatic (`S = [0, g h]`),
    /// enabling the water-at-rest quadrature.
    fn hydrostatic(&self) -> Option<f64> {
        None
    }

    /// Linearized free surface `η̃` for a singular cell, given the depth-at-rest values.
    fn at_rest_surface(
        &self,
        _ul: &[f64; M],
        _ur: &[f64; M],
        _hl: f64,
        _hr: f64,
    ) -> Result<f64> {
        Err(crate::error::Error::Config(format!(
            "{} has no water-at-rest formulation",
            self.name()
        )))
    }
}

#[cfg(test)]
pub(crate) mod testing {
    use super::*;

    /// Central-difference Jacobian of the flux.
    pub fn fd_jacobian<const M: usize>(model: &impl BalanceLaw<M>, u: &[f64; M]) -> Matrix<M> {
        let mut out = [[0.0; M]; M];
        for c in 0..M {
            let h = 1e-7 * u[c].abs().max(1.0);
            let mut up = *u;
            let mut um = *u;
            up[c] += h;
            um[c] -= h;
            let (fp, fm) = (model.flux(&up), model.flux(&um));
            for r in 0..M {
                out[r][c] = (fp[r] - fm[r]) / (2.0 * h);
            }
        }
        out
    }

    pub fn max_abs<const M: usize>(a: &Matrix<M>) -> f64 {
        a.iter().flatten().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_diff<const M: usize>(a: &Matrix<M>, b: &Matrix<M>) -> f64 {
        a.iter()
            .flatten()
            .zip(b.iter().flatten())
            .fold(0.0, |m, (x, y)| m.max((x - y).abs()))
    }
}
