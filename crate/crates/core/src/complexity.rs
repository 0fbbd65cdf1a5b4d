//! Embedding small-generated subalgebras of `L(p,n)` into larger members of
//! the family, and the equational-complexity lower bound.
//!
//! If `2^γ < p+1`, any `γ` elements of `L(p,n)` leave two `a`-atoms `a_i`,
//! `a_j` that no generator separates. The generated subalgebra then sits
//! inside `Lij(p,n)`, which embeds into `L(p',n)` for every `p' ≥ p` with the
//! `t`-atoms fixed.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{generate_subalgebra, Element, Embedding, FiniteRelationAlgebra, SubalgebraDescription};
use crate::error::{Error, Result};
use crate::gf::is_prime_power;
use crate::lpn::{build_lpn_arc, fusion_embedding_from_parent, FusionSpec, LpnParams};

fn is_odd_prime_power(q: u64) -> bool {
    q % 2 == 1 && q <= u32::MAX as u64 && is_prime_power(q as u32)
}

/// Smallest odd prime power `p > 2^γ - 1` and `n = (p+1)/2`.
pub fn choose_params(gamma: u32) -> Result<(usize, usize)> {
    if gamma == 0 {
        return Err(Error::Parameter("gamma must be at least 1".into()));
    }
    if gamma > 60 {
        return Err(Error::Parameter(format!("gamma = {gamma} is too large")));
    }
    let lo = (1u64 << gamma).max(3);
    let hi = 1u64 << (gamma + 2);
    let p = (lo..=hi)
        .find(|&q| is_odd_prime_power(q))
        .ok_or_else(|| Error::Internal(format!("no odd prime power in [{lo}, {hi}]")))?;
    Ok((p as usize, (p as usize).div_ceil(2)))
}

/// First pair `i < j` (lexicographic) such that every generator contains
/// both `a_i`, `a_j` or neither.
pub fn pigeonhole_pair(alg: &FiniteRelationAlgebra, gens: &[Element]) -> Result<(usize, usize)> {
    let params = alg
        .lpn_params()
        .ok_or_else(|| Error::Usage("pigeonhole_pair needs an L(p,n) algebra".into()))?;
    let pattern = |i: usize| -> Vec<bool> { gens.iter().map(|g| g.bits() >> params.a(i) & 1 == 1).collect() };
    let pats: Vec<Vec<bool>> = (0..=params.p).map(pattern).collect();
    for i in 0..=params.p {
        for j in i + 1..=params.p {
            if pats[i] == pats[j] {
                return Ok((i, j));
            }
        }
    }
    Err(Error::Domain(format!(
        "no unseparated pair: {} generators separate all {} a-atoms",
        gens.len(),
        params.p + 1
    )))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GammaWitnessPlan {
    pub gamma: u32,
    pub p: usize,
    pub n: usize,
    pub pair: (usize, usize),
    pub target_p: usize,
}

impl GammaWitnessPlan {
    /// Checks `2^γ < p+1`, `2n > p`, `p' ≥ p` and that `pair` is unseparated.
    pub fn new(alg: &FiniteRelationAlgebra, gens: &[Element], target_p: usize) -> Result<Self> {
        let params = alg
            .lpn_params()
            .ok_or_else(|| Error::Usage("plan needs an L(p,n) algebra".into()))?;
        let gamma = gens.len() as u32;
        if gamma == 0 {
            return Err(Error::Usage("at least one generator required".into()));
        }
        if gamma >= 64 || (1u64 << gamma) > params.p as u64 {
            return Err(Error::Domain(format!("2^{gamma} is not below p+1 = {}", params.p + 1)));
        }
        if 2 * params.n <= params.p {
            return Err(Error::Domain(format!("need 2n > p, got n = {} p = {}", params.n, params.p)));
        }
        if target_p < params.p {
            return Err(Error::Parameter(format!("target p' = {target_p} is below p = {}", params.p)));
        }
        Ok(GammaWitnessPlan {
            gamma,
            p: params.p,
            n: params.n,
            pair: pigeonhole_pair(alg, gens)?,
            target_p,
        })
    }
}

/// Default target: the least prime power `p' ≥ 2p+1`.
pub fn default_target(p: usize) -> usize {
    (2 * p + 1..).find(|&q| is_prime_power(q as u32)).expect("prime powers are unbounded")
}

#[derive(Clone, Debug)]
pub struct GammaEmbedding {
    pub plan: GammaWitnessPlan,
    pub subalgebra: SubalgebraDescription,
    pub embedding: Embedding,
}

/// `Sg(gens) ⊆ Lij(p,n) → L(p',n)`, verified before it is returned.
pub fn build_gamma_embedding(
    alg: &Arc<FiniteRelationAlgebra>,
    gens: &[Element],
    target_p: usize,
) -> Result<GammaEmbedding> {
    let plan = GammaWitnessPlan::new(alg, gens, target_p)?;
    let params = LpnParams::new(plan.p, plan.n)?;
    let sg = generate_subalgebra(alg, gens)?;
    let ident: BTreeMap<u64, u64> = sg.atoms().iter().map(|&a| (a, a)).collect();
    let inclusion = Embedding::new(alg.clone(), sg.clone(), alg.clone(), &ident)?;
    let fusion = fusion_embedding_from_parent(params, FusionSpec::new(plan.pair.0, plan.pair.1)?, target_p)?;
    let embedding = inclusion
        .then(&fusion)
        .map_err(|e| Error::Internal(format!("subalgebra not absorbed by the fused algebra: {e}")))?;
    let v = embedding.check();
    if !v.ok {
        return Err(Error::Internal(format!("composite map is not an embedding: {:?}", v.failure)));
    }
    // t-atoms are fixed: every domain atom keeps its t-part.
    let target = LpnParams::new(target_p, plan.n)?;
    for (a, img) in embedding.atom_images() {
        for k in 1..=plan.n {
            if (a >> params.t(k) & 1) != (img >> target.t(k) & 1) {
                return Err(Error::Internal(format!("t{k} is not fixed")));
            }
        }
    }
    Ok(GammaEmbedding {
        plan,
        subalgebra: sg,
        embedding,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PipelineTrial {
    pub seed: u64,
    pub generators: Vec<String>,
    pub pair: Option<(usize, usize)>,
    pub subalgebra_atoms: usize,
    pub ok: bool,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PipelineReport {
    pub gamma: u32,
    pub p: usize,
    pub n: usize,
    pub target_p: usize,
    pub trials: Vec<PipelineTrial>,
    pub passed: usize,
}

/// `gamma` uniformly random elements of `alg`, from `seed`.
pub fn random_generators(alg: &FiniteRelationAlgebra, gamma: u32, seed: u64) -> Vec<Element> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..gamma)
        .map(|_| alg.element(rng.gen::<u64>() & alg.universe()).expect("masked"))
        .collect()
}

/// Runs the embedding pipeline on `trials` random generator sets in
/// `L(choose_params(gamma))`, trial `i` seeded with `seed0 + i`.
pub fn run_pipeline(gamma: u32, trials: u64, seed0: u64, target_p: Option<usize>) -> Result<PipelineReport> {
    let (p, n) = choose_params(gamma)?;
    let alg = build_lpn_arc(LpnParams::new(p, n)?)?;
    let target_p = target_p.unwrap_or_else(|| default_target(p));
    let trials: Vec<PipelineTrial> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let seed = seed0.wrapping_add(i);
            let gens = random_generators(&alg, gamma, seed);
            let generators = gens.iter().map(|g| alg.format(*g)).collect();
            match build_gamma_embedding(&alg, &gens, target_p) {
                Ok(e) => PipelineTrial {
                    seed,
                    generators,
                    pair: Some(e.plan.pair),
                    subalgebra_atoms: e.subalgebra.len(),
                    ok: true,
                    error: None,
                },
                Err(err) => PipelineTrial {
                    seed,
                    generators,
                    pair: pigeonhole_pair(&alg, &gens).ok(),
                    subalgebra_atoms: 0,
                    ok: false,
                    error: Some(err.to_string()),
                },
            }
        })
        .collect();
    let passed = trials.iter().filter(|t| t.ok).count();
    Ok(PipelineReport {
        gamma,
        p,
        n,
        target_p,
        trials,
        passed,
    })
}

/// `|L(p,n)| = 2^(p+n+2)`.
pub fn algebra_size(p: usize, n: usize) -> BigUint {
    BigUint::from(1u8) << (p + n + 2)
}

fn log2_big(m: &BigUint) -> f64 {
    let bits = m.bits();
    if bits <= 64 {
        return (m.iter_u64_digits().next().unwrap_or(0) as f64).log2();
    }
    let shift = bits - 64;
    let top = (m >> shift).iter_u64_digits().next().unwrap_or(0);
    (top as f64).log2() + shift as f64
}

/// `log2(2 log2 m - 5) - log2 3`, defined for `m ≥ 2^7`.
pub fn beta_lower_bound(m: &BigUint) -> Result<f64> {
    if m.bits() < 8 {
        return Err(Error::Domain(format!("beta bound needs m >= 128, got {m}")));
    }
    Ok(beta_from_log2(log2_big(m)))
}

/// The bound as a function of `log2 m`.
pub fn beta_from_log2(log2m: f64) -> f64 {
    (2.0 * log2m - 5.0).log2() - 3f64.log2()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainRow {
    pub p: usize,
    pub n: usize,
    /// `log2 |L(p,n)| = ⌈(3p+5)/2⌉`.
    pub size_log2: usize,
    pub beta: f64,
    pub log2_p_plus_1: f64,
    pub holds: bool,
}

/// `β(|L(p,⌈(p+1)/2⌉)|) < log2(p+1)` for each odd prime power `p ≤ max_p`.
pub fn beta_chain(max_p: usize) -> Vec<ChainRow> {
    (3..=max_p)
        .filter(|&p| is_odd_prime_power(p as u64))
        .map(|p| {
            let n = (p + 2) / 2;
            let e = p + n + 2;
            let beta = beta_from_log2(e as f64);
            let rhs = ((p + 1) as f64).log2();
            ChainRow {
                p,
                n,
                size_log2: e,
                beta,
                log2_p_plus_1: rhs,
                holds: beta < rhs,
            }
        })
        .collect()
}
