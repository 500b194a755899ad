//! Uniqueness and existence certificate for the reference problem, once with
//! the known Lipschitz constant and once with a sampled estimate.

use fracbvp::benchmark;
use fracbvp::certify::{certify, CertifyOptions, GrowthSpec, Psi};

fn main() -> fracbvp::Result<()> {
    let spec = benchmark::spec();
    let options = CertifyOptions::default();
    // |f| <= 1/10 (1 + |u| + |v|)
    let growth = GrowthSpec::new(0.1, Psi::Affine { a: 1.0, b: 1.0 })?;

    let supplied = certify(&spec, Some(benchmark::LIPSCHITZ_K), Some(&growth), &options)?;
    print!("{}", supplied.to_key_values());

    let estimated = certify(&spec, None, None, &options)?;
    println!();
    println!("sampled k = {:.6}, d = {:.6}, unique = {}", estimated.k, estimated.d, estimated.unique);
    Ok(())
}
