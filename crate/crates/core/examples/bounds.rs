//! The counting inequalities at small parameters, the least m at which both
//! hold, and the sufficiency thresholds.

use lpn::xi::{eval_bounds, power_parameters, sufficiency_thresholds};

fn main() {
    for (p, n) in [(3u64, 2u64), (5, 3), (7, 3)] {
        let least = (1..=30u32).find(|&m| {
            power_parameters(p, m).is_some_and(|(d, k)| eval_bounds(p, n, d, k).both_hold())
        });
        let t = sufficiency_thresholds(p, n);
        println!("p={p} n={n}: least m with both inequalities {least:?}; guaranteed from m={}", t.m_guaranteed);
        for m in 1..=3 {
            let (d, k) = power_parameters(p, m).unwrap();
            let r = eval_bounds(p, n, d, k);
            println!(
                "  m={m} d={d} k={k}: ineq1={:?} ineq2={:?} bound 10^{:.2}",
                r.ineq1_holds, r.ineq2_holds, r.failure_log10
            );
        }
    }
}
