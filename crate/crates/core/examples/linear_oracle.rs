//! Solves the linear problem for `y(t) = t` and compares against the closed
//! form built from fractional integrals of monomials.

use fracbvp::fracops::{frac_integral_monomial, gamma, Grid, GridFunction};
use fracbvp::greens::ProblemParams;
use fracbvp::solver::linear_solve;

fn main() -> fracbvp::Result<()> {
    let (a, b, xi) = (1.8, 0.6, 0.4);
    let params = ProblemParams::new(a, b, xi)?;
    let grid = Grid::new(257)?;
    let y = GridFunction::from_fn(grid, |t| t)?;
    let pair = linear_solve(&params, &y)?;

    let c1 = -gamma(2.0 - b)? * frac_integral_monomial(a - b, 1.0, 1.0)?;
    let c0 = xi / (1.0 - xi) * (frac_integral_monomial(a, 1.0, 1.0)? + c1);
    let exact = |t: f64| frac_integral_monomial(a, 1.0, t).unwrap() + c0 + c1 * t;

    let err = grid.nodes().zip(pair.u.values()).map(|(t, u)| (u - exact(t)).abs()).fold(0.0, f64::max);
    println!("u(0) = {:.12}, u(1) = {:.12}", pair.u.values()[0], pair.u.values()[256]);
    println!("max |u - exact| = {err:.3e}");
    Ok(())
}
