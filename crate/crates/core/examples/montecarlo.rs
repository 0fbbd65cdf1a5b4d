//! Empirical failure rate of the random structure with a Wilson interval.

use lpn::repr::Budget;
use lpn::xi::montecarlo;

fn main() -> lpn::Result<()> {
    for (p, n) in [(3, 1), (3, 2), (4, 2)] {
        let r = montecarlo(p, n, 1, 200, 0, &Budget::from_env())?;
        println!(
            "p={p} n={n}: {}/{} fail, 95% [{:.3}, {:.3}], analytic bound {:.3e}{}",
            r.failures,
            r.trials,
            r.wilson_low,
            r.wilson_high,
            r.bound.failure_prob_upper_bound,
            if r.vacuous { " (vacuous)" } else { "" }
        );
    }
    Ok(())
}
