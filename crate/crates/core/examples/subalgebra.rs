//! Subalgebras generated by a few elements of L(3,2).

use lpn::algebra::generate_subalgebra;
use lpn::lpn::{build_lpn, LpnParams};

fn main() -> lpn::Result<()> {
    let alg = build_lpn(LpnParams::new(3, 2)?)?;
    for gens in [vec!["1'"], vec!["a0"], vec!["a0+a1", "t1"], vec!["a0", "a1", "t1"]] {
        let elems = gens.iter().map(|g| alg.parse_element(g)).collect::<lpn::Result<Vec<_>>>()?;
        let sg = generate_subalgebra(&alg, &elems)?;
        let atoms: Vec<String> = sg.atoms().iter().map(|&a| alg.format_bits(a)).collect();
        println!("Sg({}) has {} atoms: {}", gens.join(", "), atoms.len(), atoms.join(" | "));
    }
    Ok(())
}
