//! Parses right-hand sides, evaluates them and reports parse errors with
//! their byte offsets.

use fracbvp::expr::{lipschitz_estimate, parse};

fn main() {
    for src in ["(1/10) * (sin(u) + v) + t^2", "-2^-2", "exp(-t) * abs(u - v) / 3", "3 + * t", "sinh(u)"] {
        match parse(src) {
            Ok(e) => {
                let value = e.eval(0.5, 1.0, -1.0).map_or_else(|err| err.to_string(), |x| format!("{x:.6}"));
                let k = lipschitz_estimate(&e, 64, 10.0).map_or_else(|err| err.to_string(), |x| format!("{x:.6}"));
                println!("{src:<32} => {e}");
                println!("{:<32}    f(0.5, 1, -1) = {value}, k ~ {k}", "");
            }
            Err(err) => println!("{src:<32} => error at byte {}: {err}", err.offset()),
        }
    }
}
