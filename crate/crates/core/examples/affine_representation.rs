//! The affine plane over GF(q) represents L(q,0): verify it and audit degrees.

use lpn::repr::{build_affine, degree_audit, verify_full, Budget};

fn main() -> lpn::Result<()> {
    let b = Budget::from_env();
    for q in [3, 4, 5, 7, 8, 9] {
        let s = build_affine(q)?;
        let v = verify_full(&s, &b)?;
        let audit = degree_audit(&s, &b)?;
        let degrees: Vec<String> = audit.degrees.iter().map(|d| format!("{}:{}", d.atom, d.min)).collect();
        println!("q={q}: {}; degrees {}", v.summary(&s), degrees.join(" "));
    }
    Ok(())
}
