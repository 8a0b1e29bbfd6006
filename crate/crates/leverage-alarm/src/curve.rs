//! Sampled curves (densities / CDFs) on an increasing time grid.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    Density,
    Cdf,
}

/// A nonnegative function sampled on a strictly increasing grid, with
/// trapezoid integration and argmax helpers. Grid points and values always
/// have equal length.
#[derive(Debug, Clone, Serialize)]
pub struct DensityCurve {
    grid: Vec<f64>,
    values: Vec<f64>,
    kind: CurveKind,
}

impl DensityCurve {
    pub fn new(grid: Vec<f64>, values: Vec<f64>, kind: CurveKind) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::invalid(format!(
                "grid has {} points but values has {}",
                grid.len(),
                values.len()
            )));
        }
        if grid.len() < 2 {
            return Err(Error::invalid("curve needs at least two grid points"));
        }
        for w in grid.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::invalid("grid must be strictly increasing"));
            }
        }
        for (i, v) in values.iter().enumerate() {
            if !v.is_finite() || *v < 0.0 {
                return Err(Error::invalid(format!(
                    "value {v} at grid index {i} is negative or non-finite"
                )));
            }
        }
        Ok(DensityCurve { grid, values, kind })
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn kind(&self) -> CurveKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        false // constructor enforces >= 2 points
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.grid.iter().copied().zip(self.values.iter().copied())
    }

    /// Trapezoid-rule integral over the whole grid.
    pub fn trapezoid(&self) -> f64 {
        let mut acc = 0.0;
        for i in 1..self.grid.len() {
            acc += 0.5 * (self.values[i] + self.values[i - 1]) * (self.grid[i] - self.grid[i - 1]);
        }
        acc
    }

    /// Trapezoid mass restricted to `[a, b]`, with linear interpolation at
    /// the cut points. Portions outside the grid contribute nothing.
    pub fn mass_between(&self, a: f64, b: f64) -> f64 {
        if !(b > a) {
            return 0.0;
        }
        let mut acc = 0.0;
        for i in 1..self.grid.len() {
            let (x0, x1) = (self.grid[i - 1], self.grid[i]);
            let (v0, v1) = (self.values[i - 1], self.values[i]);
            let lo = x0.max(a);
            let hi = x1.min(b);
            if hi <= lo {
                continue;
            }
            let slope = (v1 - v0) / (x1 - x0);
            let vlo = v0 + slope * (lo - x0);
            let vhi = v0 + slope * (hi - x0);
            acc += 0.5 * (vlo + vhi) * (hi - lo);
        }
        acc
    }

    /// Location and height of the sampled maximum (first index on ties).
    pub fn mode(&self) -> (f64, f64) {
        let mut best = 0;
        for i in 1..self.values.len() {
            if self.values[i] > self.values[best] {
                best = i;
            }
        }
        (self.grid[best], self.values[best])
    }
}

/// Geometric grid with `n` points from `t0` to `t1` (inclusive); both ends
/// must be positive. Suited to densities with power-law short-time behaviour
/// and exponential tails.
pub fn geometric_grid(t0: f64, t1: f64, n: usize) -> Result<Vec<f64>> {
    if !(t0 > 0.0) || !(t1 > t0) || !t1.is_finite() {
        return Err(Error::invalid(format!(
            "geometric grid needs 0 < t0 < t1, got [{t0}, {t1}]"
        )));
    }
    if n < 2 {
        return Err(Error::invalid("geometric grid needs at least 2 points"));
    }
    let ratio = (t1 / t0).ln() / (n - 1) as f64;
    let mut g: Vec<f64> = (0..n).map(|i| t0 * (ratio * i as f64).exp()).collect();
    // pin the endpoints exactly despite rounding
    g[0] = t0;
    g[n - 1] = t1;
    Ok(g)
}
