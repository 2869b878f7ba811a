use crate::error::{Error, Result};

use super::{BalanceLaw, Eigensystem, FluxBranch, Geometry, Matrix};

/// Source coefficient of the scalar model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BurgersSource {
    /// `S(U) = U^p`.
    Power(u32),
    /// `S(U) = U − C`, used by the traveling manufactured solution.
    Manufactured { speed: f64 },
}

/// `U_t + (U²/2)_x = S(U) H_x`.
#[derive(Debug, Clone)]
pub struct BurgersModel {
    source: BurgersSource,
    geometry: Geometry,
}

impl BurgersModel {
    pub fn new(exponent: u32, geometry: Geometry) -> Result<Self> {
        if exponent == 0 {
            return Err(Error::Config("source exponent must be at least 1".into()));
        }
        Ok(Self {
            source: BurgersSource::Power(exponent),
            geometry,
        })
    }

    pub fn manufactured(speed: f64, geometry: Geometry) -> Self {
        Self {
            source: BurgersSource::Manufactured { speed },
            geometry,
        }
    }

    pub fn source(&self) -> BurgersSource {
        self.source
    }

    fn exponent(&self) -> Result<u32> {
        match self.source {
            BurgersSource::Power(p) => Ok(p),
            BurgersSource::Manufactured { .. } => Err(Error::Config(
                "the manufactured source has no jump relation".into(),
            )),
        }
    }
}

/// Relative gap below which two states are treated as equal in the linearizations.
const EQUAL_STATES: f64 = 1e-8;

impl BalanceLaw<1> for BurgersModel {
    fn name(&self) -> &str {
        "burgers"
    }

    fn check_state(&self, u: &[f64; 1]) -> Result<()> {
        if u[0].is_finite() {
            Ok(())
        } else {
            Err(Error::domain(format!("non-finite value {}", u[0])))
        }
    }

    fn flux(&self, u: &[f64; 1]) -> [f64; 1] {
        [0.5 * u[0] * u[0]]
    }

    fn jacobian(&self, u: &[f64; 1]) -> Matrix<1> {
        [[u[0]]]
    }

    fn eigen_decomposition(&self, u: &[f64; 1]) -> Result<Eigensystem<1>> {
        self.check_state(u)?;
        Ok(scalar_system(u[0]))
    }

    fn roe_matrix(&self, ul: &[f64; 1], ur: &[f64; 1]) -> Matrix<1> {
        [[0.5 * (ul[0] + ur[0])]]
    }

    fn roe_eigensystem(&self, ul: &[f64; 1], ur: &[f64; 1]) -> Eigensystem<1> {
        scalar_system(0.5 * (ul[0] + ur[0]))
    }

    fn source_coeff(&self, u: &[f64; 1]) -> [f64; 1] {
        match self.source {
            BurgersSource::Power(p) => [u[0].powi(p as i32)],
            BurgersSource::Manufactured { speed } => [u[0] - speed],
        }
    }

    fn pointwise_source(&self, _u: &[f64; 1], _x: f64) -> [f64; 1] {
        [0.0]
    }

    fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    fn sourced_components(&self) -> [bool; 1] {
        [true]
    }

    fn invert_flux(&self, target: &[f64; 1], branch: FluxBranch) -> Result<[f64; 1]> {
        let f = target[0];
        if f < 0.0 {
            return Err(Error::NoRoot {
                branch,
                gap: -f,
                node: None,
            });
        }
        let u = (2.0 * f).sqrt();
        match branch {
            FluxBranch::ScalarPositive => Ok([u]),
            FluxBranch::ScalarNegative => Ok([-u]),
            other => Err(Error::Config(format!(
                "branch {other:?} does not apply to a scalar law"
            ))),
        }
    }

    fn branch_of(&self, u: &[f64; 1]) -> FluxBranch {
        if u[0] >= 0.0 {
            FluxBranch::ScalarPositive
        } else {
            FluxBranch::ScalarNegative
        }
    }

    fn singular_source(&self, ul: &[f64; 1], ur: &[f64; 1]) -> Result<[f64; 1]> {
        let p = self.exponent()?;
        let (a, b) = (ul[0], ur[0]);
        let mean = 0.5 * (a + b);
        if p == 1 {
            return Ok([mean]);
        }
        if a == 0.0 || a.signum() != b.signum() {
            return Err(Error::domain(format!(
                "jump linearization needs states of one sign, got {a} and {b}"
            )));
        }
        let alpha = b / a - 1.0;
        if alpha.abs() < EQUAL_STATES {
            return Ok([mean.powi(p as i32)]);
        }
        if p == 2 {
            return Ok([mean * a * alpha / alpha.ln_1p()]);
        }
        let e = 2 - p as i32;
        let den = b.powi(e) - a.powi(e);
        Ok([e as f64 * mean * (b - a) / den])
    }

    fn admissible_jump(&self, ul: &[f64; 1], h_left: f64, h_right: f64) -> Result<[f64; 1]> {
        let p = self.exponent()?;
        let a = ul[0];
        let dh = h_right - h_left;
        match p {
            1 => Ok([a + dh]),
            2 => Ok([a * dh.exp()]),
            _ => {
                if a == 0.0 {
                    return Err(Error::InadmissibleJump("zero left state".into()));
                }
                // U^{2-p}/(2-p) - H is invariant along the jump.
                let m = p as i32 - 2;
                let w = a.powi(-m) - m as f64 * dh;
                let inadmissible = || {
                    Error::InadmissibleJump(format!(
                        "invariant leaves the branch of {a} for a jump of {dh}"
                    ))
                };
                if w == 0.0 || !w.is_finite() {
                    return Err(inadmissible());
                }
                let magnitude = w.abs().recip().powf(1.0 / m as f64);
                let sign = if m % 2 == 1 {
                    w.signum()
                } else if w > 0.0 {
                    a.signum()
                } else {
                    return Err(inadmissible());
                };
                if sign != a.signum() {
                    return Err(inadmissible());
                }
                Ok([sign * magnitude])
            }
        }
    }
}

fn scalar_system(l: f64) -> Eigensystem<1> {
    Eigensystem {
        values: [l],
        right: [[1.0]],
        left: [[1.0]],
    }
}
