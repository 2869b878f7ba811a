use crate::error::{Error, Result};

use super::{BalanceLaw, Eigensystem, FluxBranch, Geometry, Matrix};

/// Friction coefficient `κ(U)` in the momentum source `−κ q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FrictionLaw {
    None,
    /// `κ = k h |q|`.
    QuadraticDepth { k: f64 },
    /// `κ = k |q| / h^μ`.
    Manning { k: f64, mu: f64 },
}

impl FrictionLaw {
    pub fn manning(k: f64) -> Self {
        FrictionLaw::Manning { k, mu: 7.0 / 3.0 }
    }

    pub fn kappa(&self, h: f64, q: f64) -> f64 {
        match *self {
            FrictionLaw::None => 0.0,
            FrictionLaw::QuadraticDepth { k } => k * h * q.abs(),
            FrictionLaw::Manning { k, mu } => k * q.abs() / h.powf(mu),
        }
    }
}

/// Shallow water with depth-at-rest `H`: `U = (h, q)`, `S(U) = (0, g h)`, free surface `η = h − H`.
#[derive(Debug, Clone)]
pub struct ShallowWaterModel {
    g: f64,
    friction: FrictionLaw,
    geometry: Geometry,
}

impl ShallowWaterModel {
    pub fn new(g: f64, friction: FrictionLaw, geometry: Geometry) -> Result<Self> {
        if !(g > 0.0 && g.is_finite()) {
            return Err(Error::Config(format!("gravity must be positive, got {g}")));
        }
        let coefficient_ok = match friction {
            FrictionLaw::None => true,
            FrictionLaw::QuadraticDepth { k } => k >= 0.0,
            FrictionLaw::Manning { k, mu } => k >= 0.0 && mu.is_finite(),
        };
        if !coefficient_ok {
            return Err(Error::Config(format!("invalid friction law {friction:?}")));
        }
        Ok(Self {
            g,
            friction,
            geometry,
        })
    }

    pub fn frictionless(geometry: Geometry) -> Self {
        Self {
            g: 9.81,
            friction: FrictionLaw::None,
            geometry,
        }
    }

    pub fn gravity(&self) -> f64 {
        self.g
    }

    pub fn friction(&self) -> FrictionLaw {
        self.friction
    }

    /// Critical depth `(q²/g)^{1/3}` where both flux branches meet.
    pub fn critical_depth(&self, q: f64) -> f64 {
        (q * q / self.g).cbrt()
    }

    /// Specific energy `q²/(2h²) + g h`.
    pub fn energy(&self, h: f64, q: f64) -> f64 {
        0.5 * q * q / (h * h) + self.g * h
    }

    /// Depth on `branch` with `q²/(2h²) + g h = energy`.
    pub fn depth_from_energy(&self, q: f64, energy: f64, branch: FluxBranch) -> Result<f64> {
        let g = self.g;
        let q2 = q * q;
        solve_on_branch(
            |h| 0.5 * q2 / (h * h) + g * h,
            |h| -q2 / (h * h * h) + g,
            self.critical_depth(q),
            energy,
            branch,
        )
    }

    /// `h̄ + Q (h̄² − h_l h_r) / (1 − Q h̄)` with `Q = q̄² / (g (h_l h_r)²)`.
    fn linearized_correction(&self, ul: &[f64; 2], ur: &[f64; 2]) -> Result<f64> {
        let (hl, hr) = (ul[0], ur[0]);
        let qm = 0.5 * (ul[1] + ur[1]);
        let hm = 0.5 * (hl + hr);
        let prod = hl * hr;
        let big_q = qm * qm / (self.g * prod * prod);
        let den = 1.0 - big_q * hm;
        if den.abs() < 1e-12 {
            return Err(Error::ResonantJump(den));
        }
        Ok(big_q * (hm * hm - prod) / den)
    }
}

impl BalanceLaw<2> for ShallowWaterModel {
    fn name(&self) -> &str {
        "shallow-water"
    }

    fn check_state(&self, u: &[f64; 2]) -> Result<()> {
        if !(u[0] > 0.0) || !u[0].is_finite() || !u[1].is_finite() {
            return Err(Error::domain(format!(
                "depth must be positive and finite, got (h, q) = ({}, {})",
                u[0], u[1]
            )));
        }
        Ok(())
    }

    fn flux(&self, u: &[f64; 2]) -> [f64; 2] {
        let (h, q) = (u[0], u[1]);
        [q, q * q / h + 0.5 * self.g * h * h]
    }

    fn jacobian(&self, u: &[f64; 2]) -> Matrix<2> {
        let v = u[1] / u[0];
        [[0.0, 1.0], [self.g * u[0] - v * v, 2.0 * v]]
    }

    fn eigen_decomposition(&self, u: &[f64; 2]) -> Result<Eigensystem<2>> {
        self.check_state(u)?;
        let v = u[1] / u[0];
        let c = (self.g * u[0]).sqrt();
        if c <= 1e-14 * v.abs().max(1.0) {
            return Err(Error::SonicState(v - c, v + c));
        }
        Ok(system(v, c))
    }

    fn roe_matrix(&self, ul: &[f64; 2], ur: &[f64; 2]) -> Matrix<2> {
        let (v, c) = roe_average(self.g, ul, ur);
        [[0.0, 1.0], [c * c - v * v, 2.0 * v]]
    }

    fn roe_eigensystem(&self, ul: &[f64; 2], ur: &[f64; 2]) -> Eigensystem<2> {
        let (v, c) = roe_average(self.g, ul, ur);
        system(v, c)
    }

    fn source_coeff(&self, u: &[f64; 2]) -> [f64; 2] {
        [0.0, self.g * u[0]]
    }

    fn pointwise_source(&self, u: &[f64; 2], _x: f64) -> [f64; 2] {
        [0.0, -self.friction.kappa(u[0], u[1]) * u[1]]
    }

    fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    fn sourced_components(&self) -> [bool; 2] {
        [false, true]
    }

    fn invert_flux(&self, target: &[f64; 2], branch: FluxBranch) -> Result<[f64; 2]> {
        let q = target[0];
        let g = self.g;
        let q2 = q * q;
        let h = solve_on_branch(
            |h| q2 / h + 0.5 * g * h * h,
            |h| -q2 / (h * h) + g * h,
            self.critical_depth(q),
            target[1],
            branch,
        )?;
        Ok([h, q])
    }

    fn branch_of(&self, u: &[f64; 2]) -> FluxBranch {
        if u[1].abs() < u[0] * (self.g * u[0]).sqrt() {
            FluxBranch::Subcritical
        } else {
            FluxBranch::Supercritical
        }
    }

    fn singular_source(&self, ul: &[f64; 2], ur: &[f64; 2]) -> Result<[f64; 2]> {
        self.check_state(ul)?;
        self.check_state(ur)?;
        let h_tilde = 0.5 * (ul[0] + ur[0]) + self.linearized_correction(ul, ur)?;
        Ok([0.0, self.g * h_tilde])
    }

    fn admissible_jump(&self, ul: &[f64; 2], h_left: f64, h_right: f64) -> Result<[f64; 2]> {
        self.check_state(ul)?;
        let q = ul[1];
        let energy = self.energy(ul[0], q) + self.g * (h_right - h_left);
        match self.depth_from_energy(q, energy, self.branch_of(ul)) {
            Ok(h) => Ok([h, q]),
            Err(e) => Err(Error::InadmissibleJump(e.to_string())),
        }
    }

    fn sonic_state(&self, target: &[f64; 2]) -> Option<[f64; 2]> {
        let q = target[0];
        (q != 0.0).then(|| [self.critical_depth(q), q])
    }

    fn hydrostatic(&self) -> Option<f64> {
        Some(self.g)
    }

    fn at_rest_surface(&self, ul: &[f64; 2], ur: &[f64; 2], hl: f64, hr: f64) -> Result<f64> {
        self.check_state(ul)?;
        self.check_state(ur)?;
        let eta_mean = 0.5 * ((ul[0] - hl) + (ur[0] - hr));
        Ok(eta_mean + self.linearized_correction(ul, ur)?)
    }
}

/// Roe velocity and celerity `(û, ĉ)`.
fn roe_average(g: f64, ul: &[f64; 2], ur: &[f64; 2]) -> (f64, f64) {
    let (sl, sr) = (ul[0].sqrt(), ur[0].sqrt());
    let v = (ul[1] / sl + ur[1] / sr) / (sl + sr);
    let c = (g * 0.5 * (ul[0] + ur[0])).sqrt();
    (v, c)
}

fn system(v: f64, c: f64) -> Eigensystem<2> {
    let (l1, l2) = (v - c, v + c);
    let inv = 1.0 / (l2 - l1);
    Eigensystem {
        values: [l1, l2],
        right: [[1.0, 1.0], [l1, l2]],
        left: [[l2 * inv, -inv], [-l1 * inv, inv]],
    }
}

/// Root of a convex function with minimum at `h_c`, on the branch right of `h_c`
/// (subcritical) or left of it (supercritical).
///
/// Newton started from the outer end of a bracket converges monotonically for convex
/// functions; bisection guards the iterates.
fn solve_on_branch(
    phi: impl Fn(f64) -> f64,
    dphi: impl Fn(f64) -> f64,
    h_c: f64,
    target: f64,
    branch: FluxBranch,
) -> Result<f64> {
    let no_root = |gap: f64| Error::NoRoot {
        branch,
        gap,
        node: None,
    };
    if !target.is_finite() {
        return Err(no_root(f64::NAN));
    }
    let subcritical = match branch {
        FluxBranch::Subcritical => true,
        FluxBranch::Supercritical => false,
        other => {
            return Err(Error::Config(format!(
                "branch {other:?} does not apply to shallow water"
            )))
        }
    };
    if h_c == 0.0 {
        if !subcritical {
            return Err(no_root(f64::INFINITY));
        }
        if target <= 0.0 {
            return Err(no_root(-target));
        }
    } else {
        let f_min = phi(h_c);
        if target < f_min {
            let gap = f_min - target;
            if gap <= 4.0 * f64::EPSILON * f_min.abs() {
                return Ok(h_c);
            }
            return Err(no_root(gap));
        }
    }

    let (mut lo, mut hi) = if subcritical {
        let mut hi = (2.0 * h_c).max(1e-3);
        while phi(hi) < target {
            hi *= 2.0;
            if !hi.is_finite() {
                return Err(no_root(f64::NAN));
            }
        }
        (h_c, hi)
    } else {
        let mut lo = 0.5 * h_c;
        while phi(lo) < target {
            lo *= 0.5;
            if lo == 0.0 {
                return Err(no_root(f64::NAN));
            }
        }
        (lo, h_c)
    };

    let mut h = if subcritical { hi } else { lo };
    for _ in 0..200 {
        let r = phi(h) - target;
        if r == 0.0 {
            return Ok(h);
        }
        // Keep the bracket ordered so that the root lies in [lo, hi].
        if (r > 0.0) == subcritical {
            hi = h;
        } else {
            lo = h;
        }
        let d = dphi(h);
        let mut next = h - r / d;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        if (next - h).abs() <= 1e-15 * h {
            return Ok(next);
        }
        h = next;
        if hi - lo <= 1e-15 * hi {
            return Ok(h);
        }
    }
    Ok(h)
}
