//! Solver and certificate checker for nonlinear Caputo fractional boundary
//! value problems with ratio boundary conditions:
//!
//! ```text
//! D^alpha u(t) = f(t, u(t), D^(alpha-1) u(t)),  1 < alpha <= 2,  t in [0, 1]
//! u(0) = xi u(1),  D^beta u(0) = xi D^beta u(1),  0 < beta < 1,  0 < xi < 1
//! ```
//!
//! * [`fracops`]: gamma, fractional integrals and L1 Caputo derivatives.
//! * [`greens`]: Green's function, companion kernel, product-integration weights, `G*`.
//! * [`solver`]: the fixed-point operator, Picard iteration, residual checks.
//! * [`certify`]: existence radius and contraction constant.
//! * [`expr`]: the right-hand-side expression language.
//! * [`cli`]: config files and the `solve | certify | green | example` workflows.

pub mod benchmark;
pub mod certify;
pub mod cli;
pub mod error;
pub mod expr;
pub mod fracops;
pub mod greens;
pub mod solver;
mod special;

pub use error::{DivergenceCause, Error, Result};
pub use greens::ProblemParams;
pub use solver::{ProblemSpec, SolutionPair};
