//! The square of a representation is a weak representation but not a representation.

use std::sync::Arc;

use lpn::repr::{build_affine, build_power, verify_full, verify_weak, Budget};

fn main() -> lpn::Result<()> {
    let b = Budget::from_env();
    let theta = Arc::new(build_affine(3)?);
    let sq = build_power(theta, 2)?;
    println!("points: {}", sq.base_size());
    println!("weak: {}", verify_weak(&sq, &b)?.summary(&sq));
    println!("full: {}", verify_full(&sq, &b)?.summary(&sq));
    Ok(())
}
