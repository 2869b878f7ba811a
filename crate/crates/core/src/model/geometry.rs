use std::fmt;
use std::sync::Arc;

type Field = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Geometry `H(x, t)` with its analytic slope and the positions where `H` jumps.
///
/// At a jump position `x_d` the value belongs to the left piece; see [`Geometry::left_of`].
#[derive(Clone)]
pub struct Geometry {
    value: Field,
    slope: Field,
    discontinuities: Vec<f64>,
}

impl Geometry {
    pub fn new(
        value: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        slope: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            value: Arc::new(value),
            slope: Arc::new(slope),
            discontinuities: Vec::new(),
        }
    }

    /// Time-independent geometry.
    pub fn stationary(
        value: impl Fn(f64) -> f64 + Send + Sync + 'static,
        slope: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self::new(move |x, _| value(x), move |x, _| slope(x))
    }

    pub fn flat() -> Self {
        Self::stationary(|_| 0.0, |_| 0.0)
    }

    /// `H(x) = a x + b`.
    pub fn linear(a: f64, b: f64) -> Self {
        Self::stationary(move |x| a * x + b, move |_| a)
    }

    pub fn with_discontinuities(mut self, mut at: Vec<f64>) -> Self {
        at.sort_by(f64::total_cmp);
        self.discontinuities = at;
        self
    }

    pub fn value(&self, x: f64, t: f64) -> f64 {
        (self.value)(x, t)
    }

    pub fn slope(&self, x: f64, t: f64) -> f64 {
        (self.slope)(x, t)
    }

    pub fn discontinuities(&self) -> &[f64] {
        &self.discontinuities
    }

    /// Negated geometry, `-H`.
    pub fn negated(&self) -> Self {
        let (v, s) = (self.value.clone(), self.slope.clone());
        Self {
            value: Arc::new(move |x, t| -v(x, t)),
            slope: Arc::new(move |x, t| -s(x, t)),
            discontinuities: self.discontinuities.clone(),
        }
    }

    /// Piece membership test shared by every piecewise geometry: `x` belongs to the
    /// piece left of `x_d` when `x ≤ x_d` up to a relative tolerance.
    pub fn left_of(x: f64, x_d: f64) -> bool {
        x <= x_d + 1e-12 * x_d.abs().max(1.0)
    }
}

impl fmt::Debug for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Geometry")
            .field("discontinuities", &self.discontinuities)
            .finish_non_exhaustive()
    }
}
