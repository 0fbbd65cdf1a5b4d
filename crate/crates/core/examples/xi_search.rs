//! Seed sweep over the random structure on powers of the affine plane,
//! with the witness-condition checker and the generic verifier side by side.
//!
//! cargo run --release --example xi_search -- 3 2 1 64

use lpn::repr::Budget;
use lpn::xi::{search_weakrep, SearchMode};

fn main() -> lpn::Result<()> {
    let a: Vec<u64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let get = |i: usize, d: u64| a.get(i).copied().unwrap_or(d);
    let (p, n, m, seeds) = (get(0, 3) as usize, get(1, 2) as usize, get(2, 1) as u32, get(3, 32));
    let mode = if m <= 2 { SearchMode::Strict } else { SearchMode::Fast };
    let r = search_weakrep(p, n, m, 0..seeds, mode, &Budget::from_env())?;
    println!("p={p} n={n} m={m}: {} points, seeds 0..{seeds}", r.points);
    let mut tally = std::collections::BTreeMap::new();
    for e in &r.entries {
        *tally.entry(e.condition.map_or("pass".to_string(), |c| format!("{c:?}"))).or_insert(0) += 1;
    }
    for (k, v) in tally {
        println!("  {k}: {v}");
    }
    println!("first passing seed: {:?}", r.first_pass);
    Ok(())
}
