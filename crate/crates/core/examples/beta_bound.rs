//! The equational-complexity lower bound and the inequality chain behind it.

use num_bigint::BigUint;

use lpn::complexity::{beta_chain, beta_lower_bound};

fn main() -> lpn::Result<()> {
    for e in [7u32, 16, 64, 365, 1024] {
        let m = BigUint::from(1u8) << e;
        println!("beta(2^{e}) > {:.6}", beta_lower_bound(&m)?);
    }
    for r in beta_chain(31) {
        println!("p={:>2} n={:>2} |L| = 2^{:<3} beta bound {:.4} < log2(p+1) = {:.4}: {}", r.p, r.n, r.size_log2, r.beta, r.log2_p_plus_1, r.holds);
    }
    Ok(())
}
