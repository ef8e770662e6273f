use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest grid the finite-difference operators accept.
pub const MIN_POINTS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    /// u vanishes at both end nodes.
    #[default]
    DirichletBoth,
}

/// Uniform discretization of the coordinate on `[r_min, r_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    r_min: f64,
    r_max: f64,
    n_points: usize,
    spacing: f64,
    boundary: Boundary,
}

impl Grid {
    pub fn new(r_min: f64, r_max: f64, n_points: usize) -> Result<Self> {
        if !r_min.is_finite() || !r_max.is_finite() {
            return Err(Error::InvalidGrid(format!(
                "bounds must be finite, got [{r_min}, {r_max}]"
            )));
        }
        if r_min >= r_max {
            return Err(Error::InvalidGrid(format!(
                "r_min ({r_min}) must be below r_max ({r_max})"
            )));
        }
        if n_points < MIN_POINTS {
            return Err(Error::InvalidGrid(format!(
                "n_points = {n_points} is below the minimum of {MIN_POINTS}"
            )));
        }
        let spacing = (r_max - r_min) / (n_points - 1) as f64;
        Ok(Self {
            r_min,
            r_max,
            n_points,
            spacing,
            boundary: Boundary::DirichletBoth,
        })
    }

    /// Grid on `[r_min, r_max]` whose spacing is as close as possible to `h`
    /// without exceeding it.
    pub fn with_spacing(r_min: f64, r_max: f64, h: f64) -> Result<Self> {
        if !(h > 0.0) {
            return Err(Error::InvalidGrid(format!("spacing must be positive, got {h}")));
        }
        let panels = ((r_max - r_min) / h).ceil().max(1.0) as usize;
        Self::new(r_min, r_max, panels + 1)
    }

    pub fn r_min(&self) -> f64 {
        self.r_min
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn node(&self, i: usize) -> f64 {
        self.r_min + i as f64 * self.spacing
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(move |i| self.node(i))
    }

    pub fn midpoint_index(&self) -> usize {
        self.n_points / 2
    }

    /// Index of the node nearest to `r`, clamped to the grid.
    pub fn nearest_index(&self, r: f64) -> usize {
        let x = ((r - self.r_min) / self.spacing).round();
        x.clamp(0.0, (self.n_points - 1) as f64) as usize
    }

    /// Samples `f` on every node. Non-finite samples are an error.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Result<GridFunction> {
        GridFunction::new(*self, self.nodes().map(f).collect())
    }

    pub fn same_as(&self, other: &Grid) -> bool {
        self.n_points == other.n_points
            && self.r_min.to_bits() == other.r_min.to_bits()
            && self.r_max.to_bits() == other.r_max.to_bits()
    }
}

/// Real values attached to the nodes of a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Grid,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::LengthMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { grid, values })
    }

    /// Skips validation; callers guarantee length and finiteness.
    pub(crate) fn from_parts(grid: Grid, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, values }
    }

    pub fn zeros(grid: Grid) -> Self {
        Self {
            grid,
            values: vec![0.0; grid.len()],
        }
    }

    pub fn constant(grid: Grid, c: f64) -> Self {
        Self {
            grid,
            values: vec![c; grid.len()],
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self::from_parts(self.grid, self.values.iter().map(|&v| f(v)).collect())
    }

    /// Applies `f(r, value)` node by node.
    pub fn map_with_node(&self, f: impl Fn(f64, f64) -> f64) -> Self {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, &v)| f(self.grid.node(i), v))
            .collect();
        Self::from_parts(self.grid, values)
    }

    pub fn zip_with(&self, other: &GridFunction, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if !self.grid.same_as(&other.grid) {
            return Err(Error::GridMismatch);
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(Self::from_parts(self.grid, values))
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|v| c * v)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Maximum absolute value over nodes `margin..len-margin`.
    pub fn max_abs_interior(&self, margin: usize) -> f64 {
        let n = self.values.len();
        if 2 * margin >= n {
            return 0.0;
        }
        self.values[margin..n - margin]
            .iter()
            .fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Quadrature inner product.
    pub fn inner(&self, other: &GridFunction) -> Result<f64> {
        let product = self.zip_with(other, |a, b| a * b)?;
        Ok(super::calculus::integrate(&product))
    }

    /// Quadrature L2 norm.
    pub fn norm(&self) -> f64 {
        let sq = self.map(|v| v * v);
        super::calculus::integrate(&sq).max(0.0).sqrt()
    }

    /// Rescales to unit quadrature norm. Returns `None` for the zero function.
    pub fn normalized(&self) -> Option<Self> {
        let n = self.norm();
        if n > 0.0 && n.is_finite() {
            Some(self.scale(1.0 / n))
        } else {
            None
        }
    }

    /// Sign changes along the grid, ignoring values below `floor·max|f|`.
    pub fn sign_changes(&self, floor: f64) -> usize {
        let cut = floor * self.max_abs();
        let mut last = 0.0_f64;
        let mut count = 0;
        for &v in &self.values {
            if v.abs() <= cut {
                continue;
            }
            if last != 0.0 && (v > 0.0) != (last > 0.0) {
                count += 1;
            }
            last = v;
        }
        count
    }
}
