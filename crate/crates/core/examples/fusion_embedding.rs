//! Merge a0 and a1 in L(3,2) and embed the result into L(q,2) for a few q.

use lpn::lpn::{build_fused, fusion_embedding, FusionSpec, LpnParams};

fn main() -> lpn::Result<()> {
    let params = LpnParams::new(3, 2)?;
    let spec = FusionSpec::new(0, 1)?;
    let fused = build_fused(params, spec)?;
    println!("fused atoms: {}", fused.algebra.atom_names().join(" "));
    for q in [3, 4, 7, 11] {
        let e = fusion_embedding(params, spec, q)?;
        let v = e.check();
        println!("into L({q},2): {}", if v.ok { "embedding" } else { "not an embedding" });
        for (a, img) in e.atom_images() {
            println!("  {} -> {}", e.source().format_bits(a), e.target().format_bits(img));
        }
    }
    Ok(())
}
