//! Tabulates the Green's function and its companion kernel, and locates the
//! maximiser of `t -> int |G(t, s)| ds`.

use fracbvp::greens::{companion_eval, green_eval, gstar_coarse_bound, gstar_scan, ProblemParams};

fn main() -> fracbvp::Result<()> {
    let params = ProblemParams::new(1.7, 0.4, 0.3)?;
    let ticks = [0.0, 0.25, 0.5, 0.75, 1.0];

    println!("G(t, s)");
    for &t in &ticks {
        let row: Vec<String> = ticks.iter().map(|&s| format!("{:+.6}", green_eval(&params, t, s).unwrap())).collect();
        println!("t = {t:.2}: {}", row.join("  "));
    }
    println!("H(t, s)");
    for &t in &ticks {
        let row: Vec<String> = ticks.iter().map(|&s| format!("{:+.6}", companion_eval(&params, t, s).unwrap())).collect();
        println!("t = {t:.2}: {}", row.join("  "));
    }

    let scan = gstar_scan(&params, 4097, 257)?;
    println!("G* = {:.6} at t = {:.4} (triangle bound {:.6})", scan.value, scan.argmax, gstar_coarse_bound(&params));
    Ok(())
}
