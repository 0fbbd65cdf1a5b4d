use std::ops::Range;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::{build_xi_seeded, check_xi_fast, eval_bounds, power_parameters, BoundReport, XiCondition};
use crate::error::{Error, Result};
use crate::repr::{build_affine, build_power, verify_weak, Budget, LabeledStructure};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    /// Witness conditions only.
    Fast,
    /// Witness conditions and the generic verifier.
    Strict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchEntry {
    pub seed: u64,
    pub pass: bool,
    /// Failed condition of the fast check.
    pub condition: Option<XiCondition>,
    pub points: Option<(usize, usize)>,
    /// Generic verdict, strict mode only.
    pub strict_pass: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    pub p: usize,
    pub n: usize,
    pub m: u32,
    /// Size of `D ∪ D'`.
    pub points: usize,
    pub seeds: (u64, u64),
    pub mode: SearchMode,
    pub entries: Vec<SearchEntry>,
    pub first_pass: Option<u64>,
}

/// `θ^m` for the affine plane over `GF(p)`.
pub fn affine_power(p: usize, m: u32) -> Result<Arc<LabeledStructure>> {
    build_power(Arc::new(build_affine(p)?), m)
}

/// Runs the fast check (and in strict mode the generic verifier) on
/// `ξ(θ^m)` for every seed in `seeds`. Entries are in seed order.
pub fn search_weakrep(
    p: usize,
    n: usize,
    m: u32,
    seeds: Range<u64>,
    mode: SearchMode,
    budget: &Budget,
) -> Result<SearchReport> {
    let theta = affine_power(p, m)?;
    let points = 2 * theta.base_size();
    if mode == SearchMode::Strict {
        budget.check_base(points)?;
    }
    budget.check_base(theta.base_size())?;
    let entries = seeds
        .clone()
        .into_par_iter()
        .map(|seed| -> Result<SearchEntry> {
            let x = build_xi_seeded(theta.clone(), n, seed)?;
            let v = check_xi_fast(&x, budget)?;
            let strict_pass = match mode {
                SearchMode::Fast => None,
                SearchMode::Strict => Some(verify_weak(&x, budget)?.pass),
            };
            Ok(SearchEntry {
                seed,
                pass: v.pass,
                condition: v.failure.as_ref().map(|f| f.condition),
                points: v.failure.as_ref().map(|f| f.points),
                strict_pass,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if let Some(e) = entries.iter().find(|e| e.strict_pass.is_some_and(|s| s != e.pass)) {
        return Err(Error::Internal(format!(
            "fast and generic verdicts disagree at seed {}",
            e.seed
        )));
    }
    let first_pass = entries.iter().find(|e| e.pass).map(|e| e.seed);
    Ok(SearchReport {
        p,
        n,
        m,
        points,
        seeds: (seeds.start, seeds.end),
        mode,
        entries,
        first_pass,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonteCarloReport {
    pub p: usize,
    pub n: usize,
    pub m: u32,
    pub trials: u64,
    pub seed0: u64,
    pub failures: u64,
    pub rate: f64,
    /// Wilson score interval at 95%.
    pub wilson_low: f64,
    pub wilson_high: f64,
    pub bound: BoundReport,
    /// The analytic bound is at least 1 and says nothing.
    pub vacuous: bool,
    /// The interval's lower end does not exceed the analytic bound.
    pub consistent: bool,
}

pub fn wilson_interval(failures: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959_963_984_540_054f64;
    let nf = trials as f64;
    let ph = failures as f64 / nf;
    let denom = 1.0 + z * z / nf;
    let centre = (ph + z * z / (2.0 * nf)) / denom;
    let half = z * (ph * (1.0 - ph) / nf + z * z / (4.0 * nf * nf)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Empirical failure rate of `ξ(θ^m)` over seeds `seed0, seed0+1, ...`
/// compared with the analytic failure bound.
pub fn montecarlo(p: usize, n: usize, m: u32, trials: u64, seed0: u64, budget: &Budget) -> Result<MonteCarloReport> {
    let end = seed0
        .checked_add(trials)
        .ok_or_else(|| Error::Parameter("seed range overflows".into()))?;
    let report = search_weakrep(p, n, m, seed0..end, SearchMode::Fast, budget)?;
    let failures = report.entries.iter().filter(|e| !e.pass).count() as u64;
    let (lo, hi) = wilson_interval(failures, trials);
    let (d, k) = power_parameters(p as u64, m)
        .ok_or_else(|| Error::Parameter("p^(2m) overflows".into()))?;
    let bound = eval_bounds(p as u64, n as u64, d, k);
    let vacuous = bound.failure_prob_upper_bound.partial_cmp(&1.0) != Some(std::cmp::Ordering::Less);
    Ok(MonteCarloReport {
        p,
        n,
        m,
        trials,
        seed0,
        failures,
        rate: if trials == 0 { 0.0 } else { failures as f64 / trials as f64 },
        wilson_low: lo,
        wilson_high: hi,
        vacuous,
        consistent: vacuous || lo <= bound.failure_prob_upper_bound,
        bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n1_always_passes() {
        let b = Budget::default();
        let r = search_weakrep(3, 1, 1, 0..10, SearchMode::Strict, &b).unwrap();
        assert!(r.entries.iter().all(|e| e.pass && e.strict_pass == Some(true)));
        assert_eq!(r.first_pass, Some(0));
        let mc = montecarlo(3, 1, 1, 10, 0, &b).unwrap();
        assert_eq!(mc.failures, 0);
    }

    #[test]
    fn deterministic() {
        let b = Budget::default();
        let a = search_weakrep(3, 2, 1, 0..16, SearchMode::Fast, &b).unwrap();
        let c = search_weakrep(3, 2, 1, 0..16, SearchMode::Strict, &b).unwrap();
        assert_eq!(a.entries.len(), 16);
        for (x, y) in a.entries.iter().zip(&c.entries) {
            assert_eq!((x.seed, x.pass, x.condition, x.points), (y.seed, y.pass, y.condition, y.points));
        }
        assert_eq!(a, search_weakrep(3, 2, 1, 0..16, SearchMode::Fast, &b).unwrap());
    }

    #[test]
    fn small_m_bound_is_vacuous() {
        let mc = montecarlo(3, 2, 1, 8, 0, &Budget::default()).unwrap();
        assert!(mc.vacuous && mc.consistent);
    }

    #[test]
    fn wilson_reference() {
        let (lo, hi) = wilson_interval(0, 10);
        assert_eq!(lo, 0.0);
        assert!((hi - 0.2775).abs() < 1e-3);
        let (lo, hi) = wilson_interval(5, 10);
        assert!((lo - 0.2366).abs() < 1e-3 && (hi - 0.7634).abs() < 1e-3);
    }
}
