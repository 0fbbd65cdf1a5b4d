//! Two copies of the affine plane with every cross pair labeled t1 represent L(q,1).

use lpn::repr::{build_doubled, verify_full, Budget};

fn main() -> lpn::Result<()> {
    for q in [3, 4, 5] {
        let s = build_doubled(q)?;
        println!("q={q}: {}", verify_full(&s, &Budget::from_env())?.summary(&s));
    }
    Ok(())
}
