//! Uniform grids on `[0, 1]`, sampled functions, and fractional integral and
//! Caputo derivative operators.
//!
//! The closed-form monomial rules serve as oracles for the grid operators.
//! `frac_integral_grid` is product-trapezoid integration: the integrand is
//! interpolated piecewise linearly and the moments of the weakly singular
//! kernel against each hat function are integrated exactly.

use crate::error::{Error, Result};
pub use crate::special::gamma;
use crate::special::gamma_unchecked;

/// Uniform grid `t_i = i / (n - 1)`, `i = 0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grid {
    n: usize,
}

impl Grid {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!("grid needs at least 2 nodes, got {n}")));
        }
        Ok(Self { n })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    /// Always false; a grid has at least two nodes.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn step(&self) -> f64 {
        1.0 / (self.n - 1) as f64
    }

    /// Node `i`. The last node is exactly 1.
    pub fn node(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            1.0
        } else {
            i as f64 / (self.n - 1) as f64
        }
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.n).map(|i| self.node(i))
    }

    pub(crate) fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.n {
            return Err(Error::InvalidArgument(format!(
                "node index {i} out of range for grid of {} nodes",
                self.n
            )));
        }
        Ok(())
    }
}

/// Finite samples of a function at every node of a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Grid,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidArgument(format!(
                "{} values for a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("non-finite sample at node {i}")));
        }
        Ok(Self { grid, values })
    }

    /// Samples `f` at every node. Fails if `f` produces a non-finite value.
    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(grid, grid.nodes().map(f).collect())
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

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `max_i |self_i - other_i|`. Both functions must share a grid.
    pub fn sup_distance(&self, other: &GridFunction) -> f64 {
        debug_assert_eq!(self.grid, other.grid);
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }
}

/// Exact product-integration moments of the kernel `(t_c - s)^(p - 1)` against
/// the piecewise-linear hat basis of a uniform grid.
///
/// For the interval `[t_j, t_{j+1}]` with `m = c - j`, `left[m]` and `right[m]`
/// are the integrals of the kernel times the hat functions of node `j` and
/// node `j + 1`.
#[derive(Debug, Clone)]
pub(crate) struct PowerMoments {
    left: Vec<f64>,
    right: Vec<f64>,
}

impl PowerMoments {
    pub(crate) fn new(p: f64, grid: Grid) -> Self {
        let n = grid.len();
        let scale = grid.step().powf(p);
        let mut left = vec![0.0; n];
        let mut right = vec![0.0; n];
        for m in 1..n {
            let mf = m as f64;
            let below = mf - 1.0;
            let d_p = mf.powf(p) - below.powf(p);
            let d_p1 = mf.powf(p + 1.0) - below.powf(p + 1.0);
            let whole = d_p / p;
            let r = mf * whole - d_p1 / (p + 1.0);
            left[m] = (whole - r) * scale;
            right[m] = r * scale;
        }
        Self { left, right }
    }

    /// Weights `w` with `sum_j w_j f_j = int_0^{t_c} (t_c - s)^(p-1) f(s) ds`
    /// for piecewise-linear `f`.
    pub(crate) fn weights(&self, c: usize) -> Vec<f64> {
        let n = self.left.len();
        let mut w = vec![0.0; n];
        self.accumulate(c, 1.0, &mut w);
        w
    }

    /// Adds `scale` times the weights for endpoint `c` into `out`.
    pub(crate) fn accumulate(&self, c: usize, scale: f64, out: &mut [f64]) {
        if scale == 0.0 {
            return;
        }
        for j in 0..c {
            let m = c - j;
            out[j] += scale * self.left[m];
            out[j + 1] += scale * self.right[m];
        }
    }
}

fn check_unit_interval(t: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("t = {t} outside [0, 1]")));
    }
    Ok(())
}

/// `I^alpha s^p` evaluated at `t`: `Gamma(p+1) / Gamma(p+1+alpha) * t^(p+alpha)`.
pub fn frac_integral_monomial(alpha: f64, p: f64, t: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::Domain(format!("integral order must be > 0, got {alpha}")));
    }
    if !(p >= 0.0 && p.is_finite()) {
        return Err(Error::Domain(format!("monomial exponent must be >= 0, got {p}")));
    }
    check_unit_interval(t)?;
    Ok(gamma_unchecked(p + 1.0) / gamma_unchecked(p + 1.0 + alpha) * t.powf(p + alpha))
}

/// Caputo derivative of order `gamma_ord` in `(0, 1]` of `s^p` at `t`.
///
/// Only `p = 0` and `p >= 1` are accepted.
pub fn caputo_monomial(gamma_ord: f64, p: f64, t: f64) -> Result<f64> {
    if !(gamma_ord > 0.0 && gamma_ord <= 1.0) {
        return Err(Error::Domain(format!("Caputo order must lie in (0, 1], got {gamma_ord}")));
    }
    if !t.is_finite() || t < 0.0 {
        return Err(Error::Domain(format!("t must be finite and >= 0, got {t}")));
    }
    if p == 0.0 {
        return Ok(0.0);
    }
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::Domain(format!("monomial exponent must be 0 or >= 1, got {p}")));
    }
    Ok(gamma_unchecked(p + 1.0) / gamma_unchecked(p + 1.0 - gamma_ord) * t.powf(p - gamma_ord))
}

/// Product-trapezoid approximation of `I^alpha f(t_i)`.
pub fn frac_integral_grid(alpha: f64, f: &GridFunction, i: usize) -> Result<f64> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::Domain(format!("integral order must be > 0, got {alpha}")));
    }
    let grid = f.grid();
    grid.check_index(i)?;
    let moments = PowerMoments::new(alpha, grid);
    let w = moments.weights(i);
    let sum: f64 = w.iter().zip(f.values()).map(|(w, y)| w * y).sum();
    Ok(sum / gamma_unchecked(alpha))
}

/// L1-scheme Caputo derivative of order `gamma_ord` in `(0, 1)` at every node.
///
/// `D^g u(t_i) ~ h^-g / Gamma(2-g) * sum_{j<i} b_{i-1-j} (u_{j+1} - u_j)` with
/// `b_k = (k+1)^(1-g) - k^(1-g)`. Exact for piecewise-linear `u`.
pub fn caputo_grid(gamma_ord: f64, u: &GridFunction) -> Result<GridFunction> {
    if !(gamma_ord > 0.0 && gamma_ord < 1.0) {
        return Err(Error::Domain(format!("L1 scheme needs order in (0, 1), got {gamma_ord}")));
    }
    let grid = u.grid();
    let n = grid.len();
    if n < 3 {
        return Err(Error::InvalidArgument(format!("L1 scheme needs n >= 3, got {n}")));
    }
    let one_minus = 1.0 - gamma_ord;
    let b: Vec<f64> = (0..n)
        .map(|k| (k as f64 + 1.0).powf(one_minus) - (k as f64).powf(one_minus))
        .collect();
    let diffs: Vec<f64> = u.values().windows(2).map(|w| w[1] - w[0]).collect();
    let scale = grid.step().powf(-gamma_ord) / gamma_unchecked(2.0 - gamma_ord);
    let mut out = vec![0.0; n];
    for (i, slot) in out.iter_mut().enumerate().skip(1) {
        let s: f64 = diffs[..i].iter().enumerate().map(|(j, d)| b[i - 1 - j] * d).sum();
        *slot = scale * s;
    }
    GridFunction::new(grid, out)
}
