//! The reference problem used throughout the tests and examples:
//!
//! ```text
//! D^(3/2) u = sin^2 t / (11 (e^2t + 3 e^t + 1)) (3 + t + 5 u + D^(1/2) u)
//! u(0) = u(1) / 2,   D^(1/2) u(0) = D^(1/2) u(1) / 2
//! ```

use crate::greens::ProblemParams;
use crate::solver::ProblemSpec;

pub const ALPHA: f64 = 1.5;
pub const BETA: f64 = 0.5;
pub const XI: f64 = 0.5;
pub const RHS: &str = "sin(t)^2/(11*(exp(2*t)+3*exp(t)+1))*(3+t+5*u+v)";
/// Lipschitz constant claimed for [`RHS`].
pub const LIPSCHITZ_K: f64 = 1.0 / 11.0;
/// Published upper bound on `G*` for these parameters, used as a pinned input.
pub const REPORTED_GSTAR_BOUND: f64 = 3.1601;

pub fn params() -> ProblemParams {
    ProblemParams::new(ALPHA, BETA, XI).expect("benchmark parameters are valid")
}

pub fn spec() -> ProblemSpec {
    ProblemSpec::parse(params(), RHS).expect("benchmark rhs parses")
}

/// True when `params` is the benchmark parameter triple.
pub fn matches(params: &ProblemParams) -> bool {
    params.alpha() == ALPHA && params.beta() == BETA && params.xi() == XI
}
