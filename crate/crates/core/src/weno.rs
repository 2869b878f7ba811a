//! WENO reconstruction of orders 3, 5 and 7 with Jiang–Shu indicators, and the
//! upwind splitting `𝓕± = ½(𝓕 ± |J|⁻¹J 𝓕)` built on an intermediate Jacobian.

use crate::error::{Error, Result};
use crate::grid::NodeField;
use crate::model::{mat_vec, BalanceLaw, Matrix};

/// Added to every smoothness indicator before forming the nonlinear weights.
pub const DEFAULT_EPSILON: f64 = 1e-6;

/// Indicator regularization used by the solver for WENO-`p`: `1` for WENO3, whose
/// Jiang-Shu weights otherwise lose an order at smooth extrema, and
/// [`DEFAULT_EPSILON`] above.
pub fn scheme_epsilon(order: WenoOrder) -> f64 {
    if order == WenoOrder::THREE {
        1.0
    } else {
        DEFAULT_EPSILON
    }
}

const MAX_STENCIL: usize = 7;

/// Reconstruction order `p = 2k + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WenoOrder(usize);

impl WenoOrder {
    pub const THREE: WenoOrder = WenoOrder(3);
    pub const FIVE: WenoOrder = WenoOrder(5);
    pub const SEVEN: WenoOrder = WenoOrder(7);

    pub fn new(p: usize) -> Result<Self> {
        match p {
            3 | 5 | 7 => Ok(WenoOrder(p)),
            _ => Err(Error::Config(format!("WENO order must be 3, 5 or 7, got {p}"))),
        }
    }

    pub fn p(self) -> usize {
        self.0
    }

    pub fn k(self) -> usize {
        (self.0 - 1) / 2
    }

    pub fn stencil_len(self) -> usize {
        self.0
    }
}

// Candidate interface values: row r uses stencil entries r..=r+k, leftmost first.
const CANDIDATES_3: [[f64; 2]; 2] = [[-0.5, 1.5], [0.5, 0.5]];
const CANDIDATES_5: [[f64; 3]; 3] = [
    [1.0 / 3.0, -7.0 / 6.0, 11.0 / 6.0],
    [-1.0 / 6.0, 5.0 / 6.0, 1.0 / 3.0],
    [1.0 / 3.0, 5.0 / 6.0, -1.0 / 6.0],
];
const CANDIDATES_7: [[f64; 4]; 4] = [
    [-0.25, 13.0 / 12.0, -23.0 / 12.0, 25.0 / 12.0],
    [1.0 / 12.0, -5.0 / 12.0, 13.0 / 12.0, 0.25],
    [-1.0 / 12.0, 7.0 / 12.0, 7.0 / 12.0, -1.0 / 12.0],
    [0.25, 13.0 / 12.0, -5.0 / 12.0, 1.0 / 12.0],
];

const LINEAR_3: [f64; 2] = [1.0 / 3.0, 2.0 / 3.0];
const LINEAR_5: [f64; 3] = [0.1, 0.6, 0.3];
const LINEAR_7: [f64; 4] = [1.0 / 35.0, 12.0 / 35.0, 18.0 / 35.0, 4.0 / 35.0];

// Seventh-order indicators as quadratic forms scaled by 240, with coefficients of
// v0², v0v1, v0v2, v0v3, v1², v1v2, v1v3, v2², v2v3, v3².
const INDICATORS_7: [[f64; 10]; 4] = [
    [547., -3882., 4642., -1854., 7043., -17246., 7042., 11003., -9402., 2107.],
    [267., -1642., 1602., -494., 2843., -5966., 1922., 3443., -2522., 547.],
    [547., -2522., 1922., -494., 3443., -5966., 1602., 2843., -1642., 267.],
    [2107., -9402., 7042., -1854., 11003., -17246., 4642., 7043., -3882., 547.],
];

/// Linear (optimal) weights `d_r`, leftmost substencil first.
pub fn linear_weights(order: WenoOrder) -> &'static [f64] {
    match order.k() {
        1 => &LINEAR_3,
        2 => &LINEAR_5,
        _ => &LINEAR_7,
    }
}

/// Coefficients of candidate `r` on its `k + 1` stencil values.
pub fn candidate_coefficients(order: WenoOrder, r: usize) -> &'static [f64] {
    match order.k() {
        1 => &CANDIDATES_3[r],
        2 => &CANDIDATES_5[r],
        _ => &CANDIDATES_7[r],
    }
}

fn check_len(stencil: &[f64], order: WenoOrder) {
    assert_eq!(
        stencil.len(),
        order.stencil_len(),
        "WENO{} needs {} stencil values",
        order.p(),
        order.stencil_len()
    );
}

/// Jiang–Shu smoothness indicators of the `k + 1` substencils.
pub fn smoothness_indicators(stencil: &[f64], order: WenoOrder) -> Vec<f64> {
    check_len(stencil, order);
    let mut out = [0.0; 4];
    indicators_into(stencil, order, &mut out);
    out[..=order.k()].to_vec()
}

fn indicators_into(v: &[f64], order: WenoOrder, out: &mut [f64; 4]) {
    match order.k() {
        1 => {
            out[0] = (v[1] - v[0]).powi(2);
            out[1] = (v[2] - v[1]).powi(2);
        }
        2 => {
            const A: f64 = 13.0 / 12.0;
            out[0] = A * (v[0] - 2.0 * v[1] + v[2]).powi(2)
                + 0.25 * (v[0] - 4.0 * v[1] + 3.0 * v[2]).powi(2);
            out[1] = A * (v[1] - 2.0 * v[2] + v[3]).powi(2) + 0.25 * (v[1] - v[3]).powi(2);
            out[2] = A * (v[2] - 2.0 * v[3] + v[4]).powi(2)
                + 0.25 * (3.0 * v[2] - 4.0 * v[3] + v[4]).powi(2);
        }
        _ => {
            for (r, c) in INDICATORS_7.iter().enumerate() {
                let (a, b, d, e) = (v[r], v[r + 1], v[r + 2], v[r + 3]);
                let s = a * (c[0] * a + c[1] * b + c[2] * d + c[3] * e)
                    + b * (c[4] * b + c[5] * d + c[6] * e)
                    + d * (c[7] * d + c[8] * e)
                    + c[9] * e * e;
                out[r] = s / 240.0;
            }
        }
    }
}

/// WENO reconstruction with a configurable `ε`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Weno {
    order: WenoOrder,
    eps: f64,
}

impl Weno {
    pub fn new(order: WenoOrder) -> Self {
        Self {
            order,
            eps: DEFAULT_EPSILON,
        }
    }

    pub fn with_epsilon(mut self, eps: f64) -> Self {
        self.eps = eps;
        self
    }

    pub fn order(&self) -> WenoOrder {
        self.order
    }

    pub fn epsilon(&self) -> f64 {
        self.eps
    }

    /// Nonlinear weights `ω_r = α_r / Σα`, `α_r = d_r / (ε + β_r)²`.
    pub fn weights(&self, stencil: &[f64]) -> Vec<f64> {
        check_len(stencil, self.order);
        let w = self.weights_array(stencil);
        w[..=self.order.k()].to_vec()
    }

    fn weights_array(&self, stencil: &[f64]) -> [f64; 4] {
        let mut beta = [0.0; 4];
        indicators_into(stencil, self.order, &mut beta);
        let d = linear_weights(self.order);
        let mut alpha = [0.0; 4];
        let mut sum = 0.0;
        for r in 0..d.len() {
            let t = self.eps + beta[r];
            alpha[r] = d[r] / (t * t);
            sum += alpha[r];
        }
        for a in alpha.iter_mut().take(d.len()) {
            *a /= sum;
        }
        alpha
    }

    /// Value at the right interface of the central node from values `v_{i−k}..v_{i+k}`.
    pub fn reconstruct_left(&self, stencil: &[f64]) -> f64 {
        check_len(stencil, self.order);
        let w = self.weights_array(stencil);
        combine(stencil, self.order, &w)
    }

    /// Value at the left interface of the central node from `v_{i−k+1}..v_{i+k+1}`,
    /// obtained by reflecting the arguments.
    pub fn reconstruct_right(&self, stencil: &[f64]) -> f64 {
        check_len(stencil, self.order);
        let mut rev = [0.0; MAX_STENCIL];
        let n = stencil.len();
        for (dst, src) in rev.iter_mut().zip(stencil.iter().rev()) {
            *dst = *src;
        }
        self.reconstruct_left(&rev[..n])
    }

    /// Left-biased reconstruction with externally supplied weights; linear in the data.
    pub fn reconstruct_with_weights(&self, stencil: &[f64], weights: &[f64]) -> f64 {
        check_len(stencil, self.order);
        let mut w = [0.0; 4];
        w[..weights.len()].copy_from_slice(weights);
        combine(stencil, self.order, &w)
    }

    /// The fixed linear-weight reconstruction of order `p`.
    pub fn reconstruct_linear(&self, stencil: &[f64]) -> f64 {
        self.reconstruct_with_weights(stencil, linear_weights(self.order))
    }
}

/// `v_k + Σ_r ω_r Σ_l a_rl (v_{r+l} − v_k)`; exact for constants since each row of
/// candidate coefficients sums to one.
fn combine(v: &[f64], order: WenoOrder, w: &[f64; 4]) -> f64 {
    let k = order.k();
    let center = v[k];
    let mut acc = 0.0;
    for (r, wr) in w.iter().enumerate().take(k + 1) {
        let a = candidate_coefficients(order, r);
        let q: f64 = a.iter().zip(&v[r..=r + k]).map(|(c, x)| c * (x - center)).sum();
        acc += wr * q;
    }
    center + acc
}

/// Left-biased reconstruction with the default `ε`.
pub fn weno_reconstruct_left(stencil: &[f64], order: WenoOrder) -> f64 {
    Weno::new(order).reconstruct_left(stencil)
}

/// Right-biased reconstruction with the default `ε`.
pub fn weno_reconstruct_right(stencil: &[f64], order: WenoOrder) -> f64 {
    Weno::new(order).reconstruct_right(stencil)
}

/// Split nodal fluxes on the stencil `i−k..i+k+1` of one interface.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitFluxes<const M: usize> {
    pub first: isize,
    pub plus: Vec<[f64; M]>,
    pub minus: Vec<[f64; M]>,
}

/// `𝓕±_j = ½(𝓕_j ± Σ 𝓕_j)` with `Σ = |J_{i+1/2}|⁻¹ J_{i+1/2}` from the intermediate
/// matrix of `(U_i, U_{i+1})`, over the nodes `i−k..i+k+1`.
pub fn upwind_split<L: BalanceLaw<M> + ?Sized, const M: usize>(
    model: &L,
    fluxes: &NodeField<[f64; M]>,
    states: &NodeField<[f64; M]>,
    order: WenoOrder,
    i: isize,
) -> Result<SplitFluxes<M>> {
    let k = order.k() as isize;
    let sign = interface_sign(model, states, i)?;
    let window = fluxes.window(i - k, 2 * order.k() + 2)?;
    let mut plus = Vec::with_capacity(window.len());
    let mut minus = Vec::with_capacity(window.len());
    for f in window {
        let s = mat_vec(&sign, f);
        plus.push(std::array::from_fn(|c| 0.5 * (f[c] + s[c])));
        minus.push(std::array::from_fn(|c| 0.5 * (f[c] - s[c])));
    }
    Ok(SplitFluxes {
        first: i - k,
        plus,
        minus,
    })
}

/// Sign matrix of the intermediate Jacobian between nodes `i` and `i + 1`.
pub fn interface_sign<L: BalanceLaw<M> + ?Sized, const M: usize>(
    model: &L,
    states: &NodeField<[f64; M]>,
    i: isize,
) -> Result<Matrix<M>> {
    let (ul, ur) = (states.at(i)?, states.at(i + 1)?);
    Ok(model.roe_eigensystem(ul, ur).sign_matrix())
}

/// Interface value `𝓕̂_{i+1/2} = 𝓡ᴸ(𝓕⁺_{i−k..i+k}) + 𝓡ᴿ(𝓕⁻_{i−k+1..i+k+1})`.
pub fn interface_flux<L: BalanceLaw<M> + ?Sized, const M: usize>(
    model: &L,
    fluxes: &NodeField<[f64; M]>,
    states: &NodeField<[f64; M]>,
    weno: &Weno,
    i: isize,
) -> Result<[f64; M]> {
    let k = weno.order().k();
    let sign = interface_sign(model, states, i)?;
    let window = fluxes.window(i - k as isize, 2 * k + 2)?;
    let zero = [0.0; M];
    let delta = split_reconstruct(weno, &sign, window, &zero);
    Ok(delta)
}

/// Split and reconstruct `window − shift`, returning the interface value minus `shift`.
///
/// Reconstruction commutes with adding a constant, so the shift changes nothing
/// mathematically; it keeps nearly constant data from losing digits.
pub(crate) fn split_reconstruct<const M: usize>(
    weno: &Weno,
    sign: &Matrix<M>,
    window: &[[f64; M]],
    shift: &[f64; M],
) -> [f64; M] {
    let n = window.len();
    let p = n - 1;
    let mut plus = [[0.0; MAX_STENCIL + 1]; M];
    let mut minus = [[0.0; MAX_STENCIL + 1]; M];
    for (j, f) in window.iter().enumerate() {
        let v: [f64; M] = std::array::from_fn(|c| f[c] - shift[c]);
        let s = mat_vec(sign, &v);
        for c in 0..M {
            plus[c][j] = 0.5 * (v[c] + s[c]);
            minus[c][j] = 0.5 * (v[c] - s[c]);
        }
    }
    std::array::from_fn(|c| {
        weno.reconstruct_left(&plus[c][..p]) + weno.reconstruct_right(&minus[c][1..n])
    })
}
