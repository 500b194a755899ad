//! Grid fractional integrals and L1 Caputo derivatives against their exact
//! values on power functions.

use fracbvp::fracops::{caputo_grid, caputo_monomial, frac_integral_grid, frac_integral_monomial, Grid, GridFunction};

fn main() -> fracbvp::Result<()> {
    let p = 2.5;
    for n in [65, 129, 257, 513, 1025] {
        let grid = Grid::new(n)?;
        let f = GridFunction::from_fn(grid, |t| t.powf(p))?;
        let int_err = (frac_integral_grid(0.7, &f, n - 1)? - frac_integral_monomial(0.7, p, 1.0)?).abs();
        let d = caputo_grid(0.5, &f)?;
        let der_err = grid
            .nodes()
            .zip(d.values())
            .map(|(t, x)| (x - caputo_monomial(0.5, p, t).unwrap()).abs())
            .fold(0.0, f64::max);
        println!("n = {n:>4}  I^0.7 error {int_err:.3e}  D^0.5 error {der_err:.3e}");
    }
    Ok(())
}
