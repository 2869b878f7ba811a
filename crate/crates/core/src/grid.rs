//! Uniform point meshes, nodal states and ghost-extended node arrays.

use crate::error::{Error, Result};

/// Uniform mesh of `n_intervals + 1` nodes `x_j = x_start + j dx` on `[x_start, x_end]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    x_start: f64,
    x_end: f64,
    n_intervals: usize,
    dx: f64,
}

impl Grid {
    pub fn new(x_start: f64, x_end: f64, n_intervals: usize) -> Result<Self> {
        if n_intervals == 0 {
            return Err(Error::Config("a grid needs at least one interval".into()));
        }
        if !(x_start.is_finite() && x_end.is_finite() && x_end > x_start) {
            return Err(Error::Config(format!(
                "invalid interval [{x_start}, {x_end}]"
            )));
        }
        Ok(Self {
            x_start,
            x_end,
            n_intervals,
            dx: (x_end - x_start) / n_intervals as f64,
        })
    }

    pub fn x_start(&self) -> f64 {
        self.x_start
    }

    pub fn x_end(&self) -> f64 {
        self.x_end
    }

    pub fn n_intervals(&self) -> usize {
        self.n_intervals
    }

    pub fn node_count(&self) -> usize {
        self.n_intervals + 1
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    /// Coordinate of node `j`; negative or `> N` indices address ghost nodes.
    pub fn node(&self, j: isize) -> f64 {
        self.x_start + j as f64 * self.dx
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.n_intervals as isize).map(move |j| self.node(j))
    }

    /// Index of the last node, `N`.
    pub fn last(&self) -> isize {
        self.n_intervals as isize
    }
}

/// Nodal values of an `M`-component solution on a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct State<const M: usize> {
    grid: Grid,
    values: Vec<[f64; M]>,
}

impl<const M: usize> State<M> {
    pub fn new(grid: Grid, values: Vec<[f64; M]>) -> Result<Self> {
        if values.len() != grid.node_count() {
            return Err(Error::GridMismatch(format!(
                "{} values for {} nodes",
                values.len(),
                grid.node_count()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> [f64; M]) -> Self {
        let values = grid.nodes().map(f).collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[[f64; M]] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [[f64; M]] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<[f64; M]> {
        self.values
    }

    pub fn component(&self, c: usize) -> Vec<f64> {
        self.values.iter().map(|u| u[c]).collect()
    }

    /// Largest absolute nodewise difference over all components.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max)
    }
}

/// Values attached to a contiguous range of node indices `first..first + len`,
/// where indices may be negative (ghost nodes left of `x_0`).
#[derive(Debug, Clone, PartialEq)]
pub struct NodeField<T> {
    first: isize,
    data: Vec<T>,
}

impl<T: Clone> NodeField<T> {
    pub fn filled(first: isize, len: usize, value: T) -> Self {
        Self {
            first,
            data: vec![value; len],
        }
    }
}

impl<T> NodeField<T> {
    pub fn from_vec(first: isize, data: Vec<T>) -> Self {
        Self { first, data }
    }

    pub fn first(&self) -> isize {
        self.first
    }

    /// Index of the last stored node.
    pub fn last(&self) -> isize {
        self.first + self.data.len() as isize - 1
    }

    pub fn contains(&self, j: isize) -> bool {
        j >= self.first && j <= self.last()
    }

    pub fn get(&self, j: isize) -> Option<&T> {
        if self.contains(j) {
            Some(&self.data[(j - self.first) as usize])
        } else {
            None
        }
    }

    /// Checked access returning a stencil error for out-of-range indices.
    pub fn at(&self, j: isize) -> Result<&T> {
        self.get(j).ok_or(Error::StencilOutOfRange { index: j })
    }

    pub fn set(&mut self, j: isize, value: T) {
        let first = self.first;
        self.data[(j - first) as usize] = value;
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.data
    }

    /// Contiguous window of nodes `from..from + len`.
    pub fn window(&self, from: isize, len: usize) -> Result<&[T]> {
        let to = from + len as isize - 1;
        if !self.contains(from) {
            return Err(Error::StencilOutOfRange { index: from });
        }
        if !self.contains(to) {
            return Err(Error::StencilOutOfRange { index: to });
        }
        let start = (from - self.first) as usize;
        Ok(&self.data[start..start + len])
    }
}

impl<T> std::ops::Index<isize> for NodeField<T> {
    type Output = T;

    fn index(&self, j: isize) -> &T {
        &self.data[(j - self.first) as usize]
    }
}

impl<T> std::ops::IndexMut<isize> for NodeField<T> {
    fn index_mut(&mut self, j: isize) -> &mut T {
        &mut self.data[(j - self.first) as usize]
    }
}
