//! The random structure `ξ(θ)`: two copies `D`, `D'` of a weak
//! representation `θ` of `L(p,0)`, with every cross pair `(x, y')` put into
//! one of `n` classes `T_1..T_n`. Class `i` pairs (and their converses) are
//! labeled `t_i`, which makes `ξ` a candidate weak representation of `L(p,n)`.

mod bounds;
mod fast;
mod partition;
mod search;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lpn::{build_lpn_arc, LpnParams};
use crate::repr::LabeledStructure;

pub use bounds::{
    eval_bounds, exact_failure_bound, exact_verdicts, log_margins, power_parameters, rational_to_f64,
    sufficiency_thresholds, BoundReport, EvaluationMode, Thresholds, EXACT_LIMIT,
};
pub use fast::{check_xi_fast, replay_certificate, XiCondition, XiFailure, XiVerdict};
pub use partition::{mix64, ExplicitPartition, Partition, PartitionRecipe};
pub use search::{affine_power, montecarlo, search_weakrep, wilson_interval, MonteCarloReport, SearchEntry, SearchMode, SearchReport};

/// Builds `ξ(θ)` for `L(p,n)` from a structure `θ` over `L(p,0)`.
pub fn build_xi(theta: Arc<LabeledStructure>, n: usize, partition: Partition) -> Result<LabeledStructure> {
    if n == 0 {
        return Err(Error::Parameter("n must be at least 1".into()));
    }
    let inner = theta
        .algebra()
        .lpn_params()
        .filter(|q| q.n == 0)
        .ok_or_else(|| Error::Parameter("inner structure must be over some L(p,0)".into()))?;
    if partition.n() != n || partition.d() != theta.base_size() {
        return Err(Error::Parameter(format!(
            "partition is for n={} d={}, expected n={n} d={}",
            partition.n(),
            partition.d(),
            theta.base_size()
        )));
    }
    let alg = build_lpn_arc(LpnParams::new(inner.p, n)?)?;
    Ok(LabeledStructure::xi(alg, theta, n, partition))
}

/// [`build_xi`] with the hash partition for `seed`.
pub fn build_xi_seeded(theta: Arc<LabeledStructure>, n: usize, seed: u64) -> Result<LabeledStructure> {
    let recipe = PartitionRecipe::new(seed, n, theta.base_size())?;
    build_xi(theta, n, Partition::Seeded(recipe))
}
