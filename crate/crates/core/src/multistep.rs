//! Adams–Bashforth and Adams–Moulton weights, derived exactly by integrating the
//! Lagrange basis over one step.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;

use crate::error::{Error, Result};

pub type Rational = Ratio<i128>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    AdamsBashforth,
    AdamsMoulton,
}

impl Family {
    pub fn tag(self) -> &'static str {
        match self {
            Family::AdamsBashforth => "ab",
            Family::AdamsMoulton => "am",
        }
    }

    /// Steps `s` of the order-`q` member: `q` for AB, `q − 1` for AM.
    pub fn steps_for_order(self, order: usize) -> usize {
        match self {
            Family::AdamsBashforth => order,
            Family::AdamsMoulton => order - 1,
        }
    }
}

/// Weights `β_0..β_s` applied to the nodes `j+1−s..j+1` of cell `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiStepRule {
    family: Family,
    order: usize,
    exact: Vec<Rational>,
    weights: Vec<f64>,
}

impl MultiStepRule {
    pub fn family(&self) -> Family {
        self.family
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Step count `s`; the rule spans `s + 1` nodes.
    pub fn steps(&self) -> usize {
        self.weights.len() - 1
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn exact_weights(&self) -> &[Rational] {
        &self.exact
    }

    /// True when the last weight vanishes (explicit rule).
    pub fn is_explicit(&self) -> bool {
        self.family == Family::AdamsBashforth
    }

    /// Weights of the `r`-step member of the same family.
    pub fn reduced(&self, r: usize) -> Vec<f64> {
        reduced_weights(self.family, r)
    }
}

impl fmt::Display for MultiStepRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.tag(), self.order)
    }
}

impl FromStr for MultiStepRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let family = match s.get(..2) {
            Some("ab") => Family::AdamsBashforth,
            Some("am") => Family::AdamsMoulton,
            _ => return Err(unknown_rule(s)),
        };
        let order: usize = s[2..].parse().map_err(|_| unknown_rule(s))?;
        multistep_weights(family, order).map_err(|_| unknown_rule(s))
    }
}

fn unknown_rule(s: &str) -> Error {
    Error::Unknown {
        kind: "multi-step rule",
        id: s.to_string(),
        known: "ab4, ab6, ab8, am4, am6, am8".into(),
    }
}

/// The order-`q` rule of `family`, `q ∈ {4, 6, 8}`.
pub fn multistep_weights(family: Family, order: usize) -> Result<MultiStepRule> {
    if !matches!(order, 4 | 6 | 8) {
        return Err(Error::Config(format!(
            "multi-step order must be 4, 6 or 8, got {order}"
        )));
    }
    let exact = exact_weights(family, family.steps_for_order(order));
    Ok(MultiStepRule {
        family,
        order,
        weights: exact.iter().map(to_f64).collect(),
        exact,
    })
}

/// Weights `β^r_0..β^r_r` of the `r`-step method, `r ≥ 1`; AB rules carry a trailing zero.
pub fn reduced_weights(family: Family, r: usize) -> Vec<f64> {
    assert!(r >= 1, "a multi-step rule needs at least one step");
    exact_weights(family, r).iter().map(to_f64).collect()
}

fn to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Exact weights of the `s`-step rule on nodes `τ = m − s + 1`, `m = 0..=s`, in step units.
pub fn exact_weights(family: Family, s: usize) -> Vec<Rational> {
    let nodes: Vec<i128> = match family {
        Family::AdamsBashforth => (0..s).map(|m| m as i128 - s as i128 + 1).collect(),
        Family::AdamsMoulton => (0..=s).map(|m| m as i128 - s as i128 + 1).collect(),
    };
    let mut out: Vec<Rational> = (0..nodes.len())
        .map(|m| integrate_basis(&nodes, m))
        .collect();
    if family == Family::AdamsBashforth {
        out.push(Rational::from_integer(0));
    }
    out
}

/// `∫_0^1 ℓ_m(τ) dτ` for the Lagrange basis polynomial of node `m`.
fn integrate_basis(nodes: &[i128], m: usize) -> Rational {
    // Coefficients of Π_{l≠m}(τ − τ_l), lowest degree first.
    let mut poly = vec![Rational::from_integer(1)];
    let mut denom = Rational::from_integer(1);
    for (l, &tl) in nodes.iter().enumerate() {
        if l == m {
            continue;
        }
        let mut next = vec![Rational::from_integer(0); poly.len() + 1];
        for (d, c) in poly.iter().enumerate() {
            next[d + 1] += *c;
            next[d] -= *c * tl;
        }
        poly = next;
        denom *= Rational::from_integer(nodes[m] - tl);
    }
    let integral: Rational = poly
        .iter()
        .enumerate()
        .map(|(d, c)| *c / Rational::from_integer(d as i128 + 1))
        .sum();
    integral / denom
}
