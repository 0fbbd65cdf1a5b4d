//! Build L(p,n), print its composition table and check the axioms.
//!
//! cargo run --example construct_lpn -- 3 2

use lpn::algebra::{check_axioms, AtomId};
use lpn::lpn::{build_lpn, notrap_flag, LpnParams};

fn main() -> lpn::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let (p, n) = (args.first().copied().unwrap_or(3), args.get(1).copied().unwrap_or(2));
    let params = LpnParams::new(p, n)?;
    let alg = build_lpn(params)?;
    println!("L({p},{n}): {} atoms, {:?} elements", alg.atom_count(), alg.element_count());
    for a in 0..alg.atom_count() {
        for b in a..alg.atom_count() {
            let prod = alg.atom_product(AtomId(a), AtomId(b));
            println!("  {} ; {} = {}", alg.atom_name(AtomId(a)), alg.atom_name(AtomId(b)), alg.format_bits(prod));
        }
    }
    let report = check_axioms(&alg);
    for (name, outcome) in report.outcomes() {
        println!("{name}: {}", if outcome.passed() { "pass" } else { "FAIL" });
    }
    println!("2n > p (no representation possible): {}", notrap_flag(params));
    Ok(())
}
