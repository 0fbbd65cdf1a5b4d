//! Write algebras and structures to text files and read them back.

use std::sync::Arc;

use lpn::io::{load_algebra, load_structure, print_algebra, save_structure};
use lpn::lpn::{build_lpn, LpnParams};
use lpn::repr::{build_affine, verify_weak, Budget};
use lpn::xi::build_xi_seeded;

fn main() -> lpn::Result<()> {
    let dir = std::env::temp_dir().join("lpn-file-formats");
    std::fs::create_dir_all(&dir)?;
    print!("{}", print_algebra(&build_lpn(LpnParams::new(3, 0)?)?));

    let xi = build_xi_seeded(Arc::new(build_affine(3)?), 1, 42)?;
    let path = dir.join("xi.rel");
    for f in save_structure(&xi, &path)? {
        println!("wrote {}", f.display());
    }
    let back = load_structure(&path)?;
    println!("{}", std::fs::read_to_string(&path)?);
    println!("reloaded {} with {} points: {}", back.kind_name(), back.base_size(), verify_weak(&back, &Budget::from_env())?.summary(&back));
    println!("algebra: {}", load_algebra(&path.with_extension("ra"))?);
    Ok(())
}
