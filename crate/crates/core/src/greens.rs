//! Green's function of the linear ratio-boundary problem
//!
//! ```text
//! D^alpha u = y,   u(0) = xi u(1),   D^beta u(0) = xi D^beta u(1)
//! ```
//!
//! and its companion kernel for `v = D^(alpha-1) u`. Writing
//! `c(t) = Gamma(2-beta) (xi + (1-xi) t) / (Gamma(alpha-beta) (1-xi))`,
//!
//! ```text
//! G(t,s) = (t-s)_+^(alpha-1) / Gamma(alpha)
//!        + xi (1-s)^(alpha-1) / ((1-xi) Gamma(alpha))
//!        - c(t) (1-s)^(alpha-beta-1)
//! H(t,s) = 1{s <= t} - Gamma(2-beta) t^(2-alpha) / (Gamma(3-alpha) Gamma(alpha-beta)) (1-s)^(alpha-beta-1)
//! ```
//!
//! so that `u(t) = int_0^1 G(t,s) y(s) ds` and `v(t) = int_0^1 H(t,s) y(s) ds`.
//! The factor `(1-s)^(alpha-beta-1)` is unbounded at `s = 1` when `alpha - beta < 1`;
//! quadrature weights integrate it exactly, so they stay finite.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fracops::{Grid, GridFunction, PowerMoments};
use crate::special::gamma_unchecked;

/// Orders and ratio `(alpha, beta, xi)` of the boundary value problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemParams {
    alpha: f64,
    beta: f64,
    xi: f64,
    gamma_alpha: f64,
    gamma_alpha_beta: f64,
    gamma_two_beta: f64,
    gamma_three_alpha: f64,
}

impl ProblemParams {
    /// Requires `1 < alpha <= 2`, `0 < beta < 1`, `0 < xi < 1`.
    pub fn new(alpha: f64, beta: f64, xi: f64) -> Result<Self> {
        if !(alpha > 1.0 && alpha <= 2.0) {
            return Err(Error::Domain(format!("alpha must lie in (1, 2], got {alpha}")));
        }
        if !(beta > 0.0 && beta < 1.0) {
            return Err(Error::Domain(format!("beta must lie in (0, 1), got {beta}")));
        }
        if !(xi > 0.0 && xi < 1.0) {
            return Err(Error::Domain(format!("xi must lie in (0, 1), got {xi}")));
        }
        Ok(Self {
            alpha,
            beta,
            xi,
            gamma_alpha: gamma_unchecked(alpha),
            gamma_alpha_beta: gamma_unchecked(alpha - beta),
            gamma_two_beta: gamma_unchecked(2.0 - beta),
            gamma_three_alpha: gamma_unchecked(3.0 - alpha),
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    /// True when `(1-s)^(alpha-beta-1)` blows up at `s = 1`.
    pub fn is_weakly_singular(&self) -> bool {
        self.alpha - self.beta < 1.0
    }

    /// Coefficient of `(1-s)^(alpha-beta-1)` in `G(t, .)`.
    fn boundary_coeff(&self, t: f64) -> f64 {
        self.gamma_two_beta * (self.xi + (1.0 - self.xi) * t) / (self.gamma_alpha_beta * (1.0 - self.xi))
    }

    /// Coefficient of `(1-s)^(alpha-1)` in `G(t, .)`.
    fn ratio_coeff(&self) -> f64 {
        self.xi / ((1.0 - self.xi) * self.gamma_alpha)
    }

    /// Coefficient of `(1-s)^(alpha-beta-1)` in `H(t, .)`.
    fn companion_coeff(&self, t: f64) -> f64 {
        self.gamma_two_beta * t.powf(2.0 - self.alpha) / (self.gamma_three_alpha * self.gamma_alpha_beta)
    }

    pub(crate) fn gamma_two_beta(&self) -> f64 {
        self.gamma_two_beta
    }

    pub(crate) fn gamma_three_alpha(&self) -> f64 {
        self.gamma_three_alpha
    }
}

/// Which half of the two-branch Green's function formula to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GreenBranch {
    /// `0 <= s <= t <= 1`
    Lower,
    /// `0 <= t <= s <= 1`
    Upper,
}

fn check_point(params: &ProblemParams, t: f64, s: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("t = {t} outside [0, 1]")));
    }
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::Domain(format!("s = {s} outside [0, 1]")));
    }
    if s == 1.0 && params.is_weakly_singular() {
        return Err(Error::Singular(params.alpha - params.beta));
    }
    Ok(())
}

/// Evaluates one branch formula without checking that `(t, s)` lies in its triangle.
pub fn green_branch_eval(params: &ProblemParams, branch: GreenBranch, t: f64, s: f64) -> Result<f64> {
    check_point(params, t, s)?;
    let p = params;
    let tail = p.boundary_coeff(t) * (1.0 - s).powf(p.alpha - p.beta - 1.0);
    let value = match branch {
        GreenBranch::Lower => {
            ((1.0 - p.xi) * (t - s).powf(p.alpha - 1.0) + p.xi * (1.0 - s).powf(p.alpha - 1.0))
                / (p.gamma_alpha * (1.0 - p.xi))
                - tail
        }
        GreenBranch::Upper => p.xi * (1.0 - s).powf(p.alpha - 1.0) / (p.gamma_alpha * (1.0 - p.xi)) - tail,
    };
    Ok(value)
}

/// `G(t, s)`. Uses the lower branch when `s <= t`.
pub fn green_eval(params: &ProblemParams, t: f64, s: f64) -> Result<f64> {
    let branch = if s <= t { GreenBranch::Lower } else { GreenBranch::Upper };
    green_branch_eval(params, branch, t, s)
}

/// `H(t, s)`. At `t = 0` the indicator part is empty.
pub fn companion_eval(params: &ProblemParams, t: f64, s: f64) -> Result<f64> {
    check_point(params, t, s)?;
    let indicator = if t > 0.0 && s <= t { 1.0 } else { 0.0 };
    Ok(indicator - params.companion_coeff(t) * (1.0 - s).powf(params.alpha - params.beta - 1.0))
}

/// Quadrature weights of a kernel row `K(t_i, .)` on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelWeights {
    grid: Grid,
    weights: Vec<f64>,
}

impl KernelWeights {
    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `sum_j w_j y_j`, exact for piecewise-linear `y`.
    pub fn apply(&self, y: &GridFunction) -> f64 {
        debug_assert_eq!(self.grid, y.grid());
        dot(&self.weights, y.values())
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Moment tables shared by every row on one grid.
struct RowBuilder {
    params: ProblemParams,
    grid: Grid,
    delay: PowerMoments,
    trapezoid: PowerMoments,
    ratio_row: Vec<f64>,
    boundary_row: Vec<f64>,
}

impl RowBuilder {
    fn new(params: ProblemParams, grid: Grid) -> Self {
        let last = grid.len() - 1;
        let delay = PowerMoments::new(params.alpha, grid);
        let ratio_row = delay.weights(last);
        let boundary_row = PowerMoments::new(params.alpha - params.beta, grid).weights(last);
        Self {
            params,
            grid,
            delay,
            trapezoid: PowerMoments::new(1.0, grid),
            ratio_row,
            boundary_row,
        }
    }

    fn green_row(&self, i: usize) -> Vec<f64> {
        let p = &self.params;
        let rc = p.ratio_coeff();
        let bc = p.boundary_coeff(self.grid.node(i));
        let mut w: Vec<f64> = self
            .ratio_row
            .iter()
            .zip(&self.boundary_row)
            .map(|(r, b)| rc * r - bc * b)
            .collect();
        self.delay.accumulate(i, 1.0 / p.gamma_alpha, &mut w);
        w
    }

    fn companion_row(&self, i: usize) -> Vec<f64> {
        let cc = self.params.companion_coeff(self.grid.node(i));
        let mut w: Vec<f64> = self.boundary_row.iter().map(|b| -cc * b).collect();
        self.trapezoid.accumulate(i, 1.0, &mut w);
        w
    }
}

/// Weights realising `int_0^1 G(t_i, s) y(s) ds` on `grid`.
pub fn green_row_weights(params: &ProblemParams, grid: Grid, t_index: usize) -> Result<KernelWeights> {
    grid.check_index(t_index)?;
    let weights = RowBuilder::new(*params, grid).green_row(t_index);
    Ok(KernelWeights { grid, weights })
}

/// Weights realising `int_0^1 H(t_i, s) y(s) ds` on `grid`.
pub fn companion_row_weights(params: &ProblemParams, grid: Grid, t_index: usize) -> Result<KernelWeights> {
    grid.check_index(t_index)?;
    let weights = RowBuilder::new(*params, grid).companion_row(t_index);
    Ok(KernelWeights { grid, weights })
}

/// Dense `n x n` tables of Green and companion weights, row-major.
#[derive(Debug, Clone)]
pub struct WeightTables {
    params: ProblemParams,
    grid: Grid,
    green: Vec<f64>,
    companion: Vec<f64>,
}

impl WeightTables {
    pub fn new(params: &ProblemParams, grid: Grid) -> Self {
        let builder = RowBuilder::new(*params, grid);
        let n = grid.len();
        let rows: Vec<(Vec<f64>, Vec<f64>)> = (0..n)
            .into_par_iter()
            .map(|i| (builder.green_row(i), builder.companion_row(i)))
            .collect();
        let mut green = Vec::with_capacity(n * n);
        let mut companion = Vec::with_capacity(n * n);
        for (g, h) in rows {
            green.extend(g);
            companion.extend(h);
        }
        Self {
            params: *params,
            grid,
            green,
            companion,
        }
    }

    pub fn params(&self) -> &ProblemParams {
        &self.params
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn green_row(&self, i: usize) -> &[f64] {
        let n = self.grid.len();
        &self.green[i * n..(i + 1) * n]
    }

    pub fn companion_row(&self, i: usize) -> &[f64] {
        let n = self.grid.len();
        &self.companion[i * n..(i + 1) * n]
    }

    /// Applies both tables to samples `y`, returning `(u, v)` values.
    pub fn apply(&self, y: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let n = self.grid.len();
        debug_assert_eq!(y.len(), n);
        (0..n)
            .into_par_iter()
            .map(|i| (dot(self.green_row(i), y), dot(self.companion_row(i), y)))
            .unzip()
    }
}

/// `int_a^b G(t, s) ds` in closed form, for `0 <= a <= b <= 1`.
fn green_integral(p: &ProblemParams, t: f64, a: f64, b: f64) -> f64 {
    let ab = p.alpha - p.beta;
    let delay = ((t - a).max(0.0).powf(p.alpha) - (t - b).max(0.0).powf(p.alpha)) / (p.alpha * p.gamma_alpha);
    let ratio = p.ratio_coeff() * ((1.0 - a).powf(p.alpha) - (1.0 - b).powf(p.alpha)) / p.alpha;
    let boundary = p.boundary_coeff(t) * ((1.0 - a).powf(ab) - (1.0 - b).powf(ab)) / ab;
    delay + ratio - boundary
}

/// `G(t, s)` with the `s -> 1` limit substituted at `s = 1`.
fn green_or_limit(p: &ProblemParams, t: f64, s: f64) -> f64 {
    if s >= 1.0 && p.is_weakly_singular() {
        f64::NEG_INFINITY
    } else {
        let branch = if s <= t { GreenBranch::Lower } else { GreenBranch::Upper };
        green_branch_eval(p, branch, t, s).expect("point checked by caller")
    }
}

const BISECTION_STEPS: usize = 60;

/// `int_0^1 |G(t, s)| ds`, splitting `[0, 1]` at the sign changes of `G(t, .)`
/// bracketed on an `n`-node grid.
pub fn abs_green_integral(params: &ProblemParams, t: f64, n: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("t = {t} outside [0, 1]")));
    }
    let grid = Grid::new(n)?;
    Ok(abs_green_integral_on(params, t, grid))
}

fn abs_green_integral_on(p: &ProblemParams, t: f64, grid: Grid) -> f64 {
    let nodes: Vec<f64> = grid.nodes().collect();
    let values: Vec<f64> = nodes.iter().map(|&s| green_or_limit(p, t, s)).collect();
    let mut breaks = vec![0.0];
    for j in 0..nodes.len() - 1 {
        let (a, b) = (nodes[j], nodes[j + 1]);
        let (fa, fb) = (values[j], values[j + 1]);
        if j > 0 && fa == 0.0 {
            breaks.push(a);
        } else if fa * fb < 0.0 {
            let (mut lo, mut hi, mut flo) = (a, b, fa);
            for _ in 0..BISECTION_STEPS {
                let mid = 0.5 * (lo + hi);
                let fm = green_or_limit(p, t, mid);
                if fm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if (fm < 0.0) == (flo < 0.0) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            breaks.push(0.5 * (lo + hi));
        }
    }
    breaks.push(1.0);
    breaks.windows(2).map(|w| green_integral(p, t, w[0], w[1]).abs()).sum()
}

/// Supremum of `int_0^1 |G(t, s)| ds` over the scan `t_k = k / (m - 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GStar {
    pub value: f64,
    pub argmax: f64,
}

/// `G* = sup_t int_0^1 |G(t,s)| ds`, with root bracketing on an `n`-node
/// grid in `s` and an `m`-node scan in `t`.
pub fn gstar(params: &ProblemParams, n: usize, m: usize) -> Result<f64> {
    Ok(gstar_scan(params, n, m)?.value)
}

/// As [`gstar`], also reporting where the maximum is attained.
pub fn gstar_scan(params: &ProblemParams, n: usize, m: usize) -> Result<GStar> {
    if n < 2 || m < 2 {
        return Err(Error::InvalidArgument(format!("gstar needs n, m >= 2, got n = {n}, m = {m}")));
    }
    let grid = Grid::new(n)?;
    let scan = Grid::new(m)?;
    let (value, argmax) = (0..m)
        .into_par_iter()
        .map(|k| {
            let t = scan.node(k);
            (abs_green_integral_on(params, t, grid), t)
        })
        .reduce(
            || (f64::NEG_INFINITY, 0.0),
            // ties resolve to the smaller t so the result is order-independent
            |a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a },
        );
    Ok(GStar { value, argmax })
}

/// Coarse upper bound on `G*` from the triangle inequality:
/// `1 / ((1-xi) Gamma(alpha+1)) + Gamma(2-beta) / ((1-xi) Gamma(alpha-beta+1))`.
pub fn gstar_coarse_bound(params: &ProblemParams) -> f64 {
    let p = params;
    1.0 / ((1.0 - p.xi) * gamma_unchecked(p.alpha + 1.0))
        + p.gamma_two_beta / ((1.0 - p.xi) * gamma_unchecked(p.alpha - p.beta + 1.0))
}
