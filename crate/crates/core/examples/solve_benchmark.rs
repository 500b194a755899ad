//! Picard iteration on the reference problem, with the convergence history
//! and the discrete residuals of the computed pair.
//!
//! ```bash
//! cargo run --release --example solve_benchmark
//! ```

use fracbvp::benchmark;
use fracbvp::solver::{picard_solve, residual, DEFAULT_MAX_ITER, DEFAULT_TOL};

fn main() -> fracbvp::Result<()> {
    let spec = benchmark::spec();
    let (pair, report) = picard_solve(&spec, 513, DEFAULT_TOL, DEFAULT_MAX_ITER)?;

    println!("rhs: {}", spec.rhs);
    for (k, d) in report.diffs.iter().enumerate() {
        println!("iter {:>2}  |T x - x| = {d:.3e}", k + 1);
    }
    println!("converged after {} iterations, observed ratio {:.4}", report.iterations, report.observed_ratio);

    let u = pair.u.values();
    let v = pair.v.values();
    for i in (0..u.len()).step_by(64) {
        println!("t = {:.4}  u = {:+.8}  v = {:+.8}", pair.grid().node(i), u[i], v[i]);
    }

    let res = residual(&spec, &pair)?;
    println!(
        "residuals: differential {:.2e}, u(0) - xi u(1) {:.2e}, beta condition {:.2e}, v consistency {:.2e}",
        res.differential, res.boundary_value, res.boundary_beta, res.consistency
    );
    Ok(())
}
