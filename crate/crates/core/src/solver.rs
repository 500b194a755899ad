//! Fixed-point machinery for `u = T u`, where
//! `T(u, v) = (int G f(s, u, v) ds, int H f(s, u, v) ds)` acts on sampled
//! pairs `(u, v = D^(alpha-1) u)`.

use serde::Serialize;

use crate::error::{DivergenceCause, Error, Result};
use crate::expr::{self, Expr, Var};
use crate::fracops::{caputo_grid, Grid, GridFunction};
use crate::greens::{ProblemParams, WeightTables};

pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_ITER: usize = 200;
/// Pair max-norm above which an iteration is declared divergent.
pub const DIVERGENCE_CAP: f64 = 1e8;

/// Problem parameters plus the right-hand side `f(t, u, v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub params: ProblemParams,
    pub rhs: Expr,
}

impl ProblemSpec {
    pub fn new(params: ProblemParams, rhs: Expr) -> Self {
        Self { params, rhs }
    }

    pub fn parse(params: ProblemParams, rhs: &str) -> std::result::Result<Self, expr::ParseError> {
        Ok(Self::new(params, expr::parse(rhs)?))
    }

    /// True when `f` does not depend on `u` or `v`, so `T` is a constant map.
    pub fn is_forcing_only(&self) -> bool {
        !self.rhs.references(Var::U) && !self.rhs.references(Var::V)
    }

    /// Samples `f(t_j, u_j, v_j)` on the pair's grid.
    pub fn forcing(&self, pair: &SolutionPair) -> Result<GridFunction> {
        let grid = pair.grid();
        let values = grid
            .nodes()
            .zip(pair.u.values().iter().zip(pair.v.values()))
            .enumerate()
            .map(|(node, (t, (&u, &v)))| {
                self.rhs
                    .eval(t, u, v)
                    .map_err(|source| Error::NodeEvaluation { node, t, source })
            })
            .collect::<Result<Vec<_>>>()?;
        GridFunction::new(grid, values)
    }
}

/// Samples of `u` and `v = D^(alpha-1) u` on one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionPair {
    pub u: GridFunction,
    pub v: GridFunction,
}

impl SolutionPair {
    pub fn new(u: GridFunction, v: GridFunction) -> Result<Self> {
        if u.grid() != v.grid() {
            return Err(Error::InvalidArgument("u and v live on different grids".into()));
        }
        Ok(Self { u, v })
    }

    pub fn zeros(grid: Grid) -> Self {
        Self {
            u: GridFunction::zeros(grid),
            v: GridFunction::zeros(grid),
        }
    }

    pub fn grid(&self) -> Grid {
        self.u.grid()
    }

    /// `max(||u||_inf, ||v||_inf)`.
    pub fn norm(&self) -> f64 {
        self.u.sup_norm().max(self.v.sup_norm())
    }

    pub fn distance(&self, other: &SolutionPair) -> f64 {
        self.u.sup_distance(&other.u).max(self.v.sup_distance(&other.v))
    }
}

/// History of a Picard run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IterationReport {
    pub iterations: usize,
    /// Pair max-norm of `x_{k+1} - x_k`, one entry per iteration.
    pub diffs: Vec<f64>,
    pub converged: bool,
    /// Largest `diffs[i+1] / diffs[i]` over the latter half of the history.
    pub observed_ratio: f64,
}

/// Ratios whose denominator is below this are roundoff, not contraction.
const RATIO_FLOOR: f64 = 1e-14;

fn tail_ratio(diffs: &[f64]) -> f64 {
    let ratios: Vec<f64> = diffs
        .windows(2)
        .filter(|w| w[0] > RATIO_FLOOR)
        .map(|w| w[1] / w[0])
        .collect();
    ratios[ratios.len() / 2..].iter().copied().fold(0.0, f64::max)
}

/// Starting iterate for [`picard_solve_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialGuess {
    /// `u = 0, v = 0`. A fixed point of every `f` with `f(t, 0, 0) = 0`.
    Zero,
    /// `u = c, v = 0`; consistent since the Caputo derivative kills constants.
    Constant(f64),
}

impl InitialGuess {
    fn build(self, grid: Grid) -> SolutionPair {
        match self {
            InitialGuess::Zero => SolutionPair::zeros(grid),
            InitialGuess::Constant(c) => SolutionPair {
                u: GridFunction::constant(grid, c),
                v: GridFunction::zeros(grid),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PicardOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub initial: InitialGuess,
}

impl Default for PicardOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
            initial: InitialGuess::Constant(1.0),
        }
    }
}

/// One application of `T`.
pub fn apply_t(spec: &ProblemSpec, pair: &SolutionPair, tables: &WeightTables) -> Result<SolutionPair> {
    if pair.grid() != tables.grid() {
        return Err(Error::InvalidArgument("weight tables built on a different grid".into()));
    }
    let y = spec.forcing(pair)?;
    let (u, v) = tables.apply(y.values());
    let grid = pair.grid();
    SolutionPair::new(GridFunction::new(grid, u)?, GridFunction::new(grid, v)?)
}

/// Picard iteration on an `n`-node grid from the default starting pair.
pub fn picard_solve(
    spec: &ProblemSpec,
    n: usize,
    tol: f64,
    max_iter: usize,
) -> Result<(SolutionPair, IterationReport)> {
    if n < 33 {
        return Err(Error::InvalidArgument(format!("Picard solve needs n >= 33, got {n}")));
    }
    let tables = WeightTables::new(&spec.params, Grid::new(n)?);
    let options = PicardOptions {
        tol,
        max_iter,
        ..PicardOptions::default()
    };
    picard_solve_with(spec, &tables, &options)
}

/// Picard iteration with prebuilt tables.
pub fn picard_solve_with(
    spec: &ProblemSpec,
    tables: &WeightTables,
    options: &PicardOptions,
) -> Result<(SolutionPair, IterationReport)> {
    if !(options.tol > 0.0 && options.tol <= 1e-2) {
        return Err(Error::InvalidArgument(format!("tol must lie in (0, 1e-2], got {}", options.tol)));
    }
    if options.max_iter == 0 {
        return Err(Error::InvalidArgument("max_iter must be positive".into()));
    }
    let mut pair = options.initial.build(tables.grid());
    let mut diffs = Vec::new();
    let report = |diffs: &Vec<f64>, converged| IterationReport {
        iterations: diffs.len(),
        diffs: diffs.clone(),
        converged,
        observed_ratio: tail_ratio(diffs),
    };
    for _ in 0..options.max_iter {
        let next = match apply_t(spec, &pair, tables) {
            Ok(next) => next,
            // f can overflow long before the norm cap trips
            Err(Error::NodeEvaluation { source: expr::EvalError::NonFinite, .. }) | Err(Error::Domain(_)) => {
                return Err(Error::Diverged {
                    cause: DivergenceCause::BlowUp { norm: f64::INFINITY },
                    report: Box::new(report(&diffs, false)),
                });
            }
            Err(e) => return Err(e),
        };
        let diff = next.distance(&pair);
        diffs.push(diff);
        pair = next;
        let norm = pair.norm();
        if norm > DIVERGENCE_CAP {
            return Err(Error::Diverged {
                cause: DivergenceCause::BlowUp { norm },
                report: Box::new(report(&diffs, false)),
            });
        }
        if diff <= options.tol {
            return Ok((pair, report(&diffs, true)));
        }
    }
    let last_diff = diffs.last().copied().unwrap_or(f64::INFINITY);
    Err(Error::Diverged {
        cause: DivergenceCause::IterationLimit { last_diff },
        report: Box::new(report(&diffs, false)),
    })
}

/// Solves the linear problem `D^alpha u = y` with one application of the weight tables.
pub fn linear_solve(params: &ProblemParams, y: &GridFunction) -> Result<SolutionPair> {
    let tables = WeightTables::new(params, y.grid());
    linear_solve_with(&tables, y)
}

pub fn linear_solve_with(tables: &WeightTables, y: &GridFunction) -> Result<SolutionPair> {
    if y.grid() != tables.grid() {
        return Err(Error::InvalidArgument("weight tables built on a different grid".into()));
    }
    let (u, v) = tables.apply(y.values());
    let grid = y.grid();
    SolutionPair::new(GridFunction::new(grid, u)?, GridFunction::new(grid, v)?)
}

/// How well a sampled pair solves the boundary value problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualReport {
    /// `max |D^alpha u(t_i) - f(t_i, u_i, v_i)|` over interior nodes.
    pub differential: f64,
    /// `|u(0) - xi u(1)|`
    pub boundary_value: f64,
    /// `|D^beta u(0) - xi D^beta u(1)|`
    pub boundary_beta: f64,
    /// `||D^(alpha-1) u - v||_inf`
    pub consistency: f64,
}

/// Second-order finite-difference derivative: central inside, one-sided at the ends.
fn gradient(u: &GridFunction) -> Result<GridFunction> {
    let grid = u.grid();
    let y = u.values();
    let n = y.len();
    let h = grid.step();
    let mut d = vec![0.0; n];
    d[0] = (-3.0 * y[0] + 4.0 * y[1] - y[2]) / (2.0 * h);
    d[n - 1] = (3.0 * y[n - 1] - 4.0 * y[n - 2] + y[n - 3]) / (2.0 * h);
    for i in 1..n - 1 {
        d[i] = (y[i + 1] - y[i - 1]) / (2.0 * h);
    }
    GridFunction::new(grid, d)
}

/// Caputo derivative of order in `(0, 1]`; order 1 is the classical derivative.
fn caputo_up_to_one(order: f64, u: &GridFunction) -> Result<GridFunction> {
    if order == 1.0 {
        gradient(u)
    } else {
        caputo_grid(order, u)
    }
}

/// Residual diagnostics. `D^alpha u` is computed as `D^(alpha-1)` of the
/// finite-difference derivative of `u`, so every fractional order stays in `(0, 1]`.
pub fn residual(spec: &ProblemSpec, pair: &SolutionPair) -> Result<ResidualReport> {
    let grid = pair.grid();
    let n = grid.len();
    if n < 129 {
        return Err(Error::InvalidArgument(format!("residual check needs n >= 129, got {n}")));
    }
    let p = &spec.params;
    let du = gradient(&pair.u)?;
    let d_alpha = caputo_up_to_one(p.alpha() - 1.0, &du)?;
    let f = spec.forcing(pair)?;
    let differential = (1..n - 1)
        .map(|i| (d_alpha.values()[i] - f.values()[i]).abs())
        .fold(0.0, f64::max);

    let u = pair.u.values();
    let boundary_value = (u[0] - p.xi() * u[n - 1]).abs();
    let d_beta = caputo_grid(p.beta(), &pair.u)?;
    let boundary_beta = (d_beta.values()[0] - p.xi() * d_beta.values()[n - 1]).abs();
    let consistency = caputo_up_to_one(p.alpha() - 1.0, &pair.u)?.sup_distance(&pair.v);
    Ok(ResidualReport {
        differential,
        boundary_value,
        boundary_beta,
        consistency,
    })
}
