//! The `L(p,n)` family, its fused subalgebras `Lij(p,n)` and the fusion
//! embeddings `Lij(p,n) → L(q,n)`.
//!
//! Atom order is fixed: `1'` (index 0), then `a0..ap` (indices `1..=p+1`),
//! then `t1..tn` (indices `p+2..=p+n+1`).

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{
    generate_subalgebra, Element, Embedding, FiniteRelationAlgebra, SubalgebraDescription,
    MAX_ATOMS,
};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct LpnParams {
    pub p: usize,
    pub n: usize,
}

impl LpnParams {
    pub fn new(p: usize, n: usize) -> Result<Self> {
        if p < 3 {
            return Err(Error::Parameter(format!("L(p,n) needs p >= 3, got p = {p}")));
        }
        if p + n + 2 > MAX_ATOMS {
            return Err(Error::Parameter(format!(
                "L({p},{n}) has {} atoms, more than {MAX_ATOMS}",
                p + n + 2
            )));
        }
        Ok(LpnParams { p, n })
    }

    pub fn atom_count(&self) -> usize {
        self.p + self.n + 2
    }

    /// Index of `a_i`, `0 <= i <= p`.
    pub fn a(&self, i: usize) -> usize {
        debug_assert!(i <= self.p);
        1 + i
    }

    /// Index of `t_k`, `1 <= k <= n`.
    pub fn t(&self, k: usize) -> usize {
        debug_assert!(k >= 1 && k <= self.n);
        self.p + 1 + k
    }

    /// Bitset of `A = a0 + ... + ap`.
    pub fn a_bits(&self) -> u64 {
        ((1u64 << (self.p + 1)) - 1) << 1
    }

    /// Bitset of `T = t1 + ... + tn`; zero when `n = 0`.
    pub fn t_bits(&self) -> u64 {
        ((1u64 << self.n) - 1) << (self.p + 2)
    }

    pub fn atom_names(&self) -> Vec<String> {
        let mut names = vec!["1'".to_string()];
        names.extend((0..=self.p).map(|i| format!("a{i}")));
        names.extend((1..=self.n).map(|k| format!("t{k}")));
        names
    }
}

/// Which two `a`-atoms are merged.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FusionSpec {
    pub i: usize,
    pub j: usize,
}

impl FusionSpec {
    pub fn new(i: usize, j: usize) -> Result<Self> {
        if i == j {
            return Err(Error::Parameter(format!("fusion needs distinct indices, got {i} twice")));
        }
        Ok(FusionSpec {
            i: i.min(j),
            j: i.max(j),
        })
    }

    fn check(&self, params: LpnParams) -> Result<()> {
        if self.j > params.p {
            return Err(Error::Parameter(format!(
                "fusion index {} exceeds p = {}",
                self.j, params.p
            )));
        }
        Ok(())
    }
}

/// Builds `L(p,n)` from its five composition rules (two when `n = 0`).
///
/// For `i != j` the product `a_i ; a_j` is the join of the other `a`-atoms,
/// i.e. the complement of `a_i + a_j` taken below `A`. Taking it below all of
/// `0'` instead would put every `t_k` under `a_i ; a_j` while `a_i ; t_k = T`
/// misses `a_j`, violating the triangle law.
pub fn build_lpn(params: LpnParams) -> Result<FiniteRelationAlgebra> {
    let k = params.atom_count();
    let p = params.p;
    let a_all = params.a_bits();
    let t_all = params.t_bits();
    let id = 1u64;
    let mut table = vec![0u64; k * k];
    for x in 0..k {
        table[x] = 1 << x;
        table[x * k] = 1 << x;
    }
    for i in 0..=p {
        for j in 0..=p {
            let (ai, aj) = (params.a(i), params.a(j));
            table[ai * k + aj] = if i == j {
                id | 1 << ai
            } else {
                a_all & !(1 << ai | 1 << aj)
            };
        }
        for t in 1..=params.n {
            let tk = params.t(t);
            table[params.a(i) * k + tk] = t_all;
            table[tk * k + params.a(i)] = t_all;
        }
    }
    for s in 1..=params.n {
        for u in 1..=params.n {
            table[params.t(s) * k + params.t(u)] = if s == u { id | a_all } else { a_all };
        }
    }
    Ok(FiniteRelationAlgebra::new(params.atom_names(), &[0], (0..k).collect(), table)?.with_lpn(params))
}

/// `L(p,n)` shared behind an `Arc`.
pub fn build_lpn_arc(params: LpnParams) -> Result<Arc<FiniteRelationAlgebra>> {
    build_lpn(params).map(Arc::new)
}

/// The named elements `A` and `T` of an `L(p,n)`.
pub fn named_a(alg: &FiniteRelationAlgebra) -> Result<Element> {
    let params = alg
        .lpn_params()
        .ok_or_else(|| Error::Usage("not an L(p,n) algebra".into()))?;
    alg.element(params.a_bits())
}

pub fn named_t(alg: &FiniteRelationAlgebra) -> Result<Element> {
    let params = alg
        .lpn_params()
        .ok_or_else(|| Error::Usage("not an L(p,n) algebra".into()))?;
    alg.element(params.t_bits())
}

/// `Lij(p,n)` as a standalone algebra together with its inclusion into `L(p,n)`.
#[derive(Clone, Debug)]
pub struct FusedAlgebra {
    pub params: LpnParams,
    pub spec: FusionSpec,
    pub algebra: Arc<FiniteRelationAlgebra>,
    pub parent: Arc<FiniteRelationAlgebra>,
    /// Atoms of `Lij(p,n)` as bitsets of `L(p,n)`, in the standalone algebra's atom order.
    pub blocks: Vec<u64>,
    pub inclusion: Embedding,
}

impl FusedAlgebra {
    /// The fused subalgebra as a subalgebra of the parent.
    pub fn description(&self) -> SubalgebraDescription {
        SubalgebraDescription::from_atoms(self.blocks.clone(), self.parent.universe())
            .expect("fused blocks partition the unit")
    }
}

/// Name of the merged atom, e.g. `a0a1`.
pub fn fused_atom_name(spec: FusionSpec) -> String {
    format!("a{}a{}", spec.i, spec.j)
}

/// Atoms of `Lij(p,n)` as parent bitsets: `1'`, `a_i+a_j`, the other `a_k`, then the `t_k`.
fn fused_blocks(params: LpnParams, spec: FusionSpec) -> (Vec<u64>, Vec<String>) {
    let mut blocks = vec![1u64, 1 << params.a(spec.i) | 1 << params.a(spec.j)];
    let mut names = vec!["1'".to_string(), fused_atom_name(spec)];
    for k in (0..=params.p).filter(|&k| k != spec.i && k != spec.j) {
        blocks.push(1 << params.a(k));
        names.push(format!("a{k}"));
    }
    for t in 1..=params.n {
        blocks.push(1 << params.t(t));
        names.push(format!("t{t}"));
    }
    (blocks, names)
}

pub fn build_fused(params: LpnParams, spec: FusionSpec) -> Result<FusedAlgebra> {
    spec.check(params)?;
    let parent = build_lpn_arc(params)?;
    let (blocks, names) = fused_blocks(params, spec);

    let gens: Vec<Element> = blocks.iter().map(|&b| parent.element(b)).collect::<Result<_>>()?;
    let generated = generate_subalgebra(&parent, &gens)?;
    let expected = SubalgebraDescription::from_atoms(blocks.clone(), parent.universe())?;
    if generated != expected {
        return Err(Error::Internal("fused atoms do not form a subalgebra".into()));
    }

    let algebra = Arc::new(parent.from_blocks(&blocks, names)?);
    let map: BTreeMap<u64, u64> = blocks.iter().enumerate().map(|(i, &b)| (1u64 << i, b)).collect();
    let inclusion = Embedding::new(
        algebra.clone(),
        SubalgebraDescription::full(&algebra),
        parent.clone(),
        &map,
    )?;
    Ok(FusedAlgebra {
        params,
        spec,
        algebra,
        parent,
        blocks,
        inclusion,
    })
}

/// Maps an element of `L(p,n)` lying in `Lij(p,n)` to `L(q,n)`: the merged
/// atom gains `a_{p+1} .. a_q`, every other atom is kept.
pub fn lift_bits(params: LpnParams, spec: FusionSpec, q: usize, bits: u64) -> u64 {
    let target = LpnParams { p: q, n: params.n };
    let mut out = bits & (1 | params.a_bits());
    for t in 1..=params.n {
        if bits >> params.t(t) & 1 == 1 {
            out |= 1 << target.t(t);
        }
    }
    if bits >> params.a(spec.i) & 1 == 1 {
        for k in params.p + 1..=q {
            out |= 1 << target.a(k);
        }
    }
    out
}

/// The fusion embedding `Lij(p,n) → L(q,n)` on the standalone fused algebra,
/// checked before it is returned.
pub fn fusion_embedding(params: LpnParams, spec: FusionSpec, q: usize) -> Result<Embedding> {
    if q < params.p {
        return Err(Error::Parameter(format!("target q = {q} is below p = {}", params.p)));
    }
    let fused = build_fused(params, spec)?;
    let target = build_lpn_arc(LpnParams::new(q, params.n)?)?;
    let map: BTreeMap<u64, u64> = fused
        .blocks
        .iter()
        .enumerate()
        .map(|(i, &b)| (1u64 << i, lift_bits(params, spec, q, b)))
        .collect();
    let e = Embedding::new(
        fused.algebra.clone(),
        SubalgebraDescription::full(&fused.algebra),
        target,
        &map,
    )?;
    verified(e)
}

/// The same map with `L(p,n)` as source and `Lij(p,n)` as the domain
/// subalgebra, so it composes with inclusions of smaller subalgebras.
pub fn fusion_embedding_from_parent(
    params: LpnParams,
    spec: FusionSpec,
    q: usize,
) -> Result<Embedding> {
    if q < params.p {
        return Err(Error::Parameter(format!("target q = {q} is below p = {}", params.p)));
    }
    let fused = build_fused(params, spec)?;
    let target = build_lpn_arc(LpnParams::new(q, params.n)?)?;
    let map: BTreeMap<u64, u64> = fused
        .blocks
        .iter()
        .map(|&b| (b, lift_bits(params, spec, q, b)))
        .collect();
    let e = Embedding::new(fused.parent.clone(), fused.description(), target, &map)?;
    verified(e)
}

fn verified(e: Embedding) -> Result<Embedding> {
    let v = e.check();
    if !v.ok {
        return Err(Error::Internal(format!("fusion map is not an embedding: {:?}", v.failure)));
    }
    Ok(e)
}

/// True iff `2n > p`, in which case `L(p,n)` has no representation: any
/// representation would give each point exactly `p-1` neighbours per
/// `a`-atom and at least `2n-1` of them. Metadata only; verifiers ignore it.
pub fn notrap_flag(params: LpnParams) -> bool {
    2 * params.n > params.p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{check_axioms, AtomId};

    fn params(p: usize, n: usize) -> LpnParams {
        LpnParams::new(p, n).unwrap()
    }

    #[test]
    fn l32_shape() {
        let a = build_lpn(params(3, 2)).unwrap();
        assert_eq!(a.atom_count(), 7);
        assert_eq!(a.element_count(), Some(128));
        let t1 = a.atom_by_name("t1").unwrap();
        let t2 = a.atom_by_name("t2").unwrap();
        assert_eq!(a.format_bits(a.atom_product(t1, t2)), "a0+a1+a2+a3");
    }

    #[test]
    fn l41_a_t_product() {
        let a = build_lpn(params(4, 1)).unwrap();
        let a2 = a.atom_by_name("a2").unwrap();
        let t1 = a.atom_by_name("t1").unwrap();
        assert_eq!(a.format_bits(a.atom_product(a2, t1)), "t1");
    }

    #[test]
    fn p_below_three_rejected() {
        assert!(matches!(LpnParams::new(2, 1), Err(Error::Parameter(_))));
    }

    #[test]
    fn axioms_hold_on_grid() {
        for p in 3..=9 {
            for n in 0..=4 {
                let a = build_lpn(params(p, n)).unwrap();
                assert!(check_axioms(&a).all_pass(), "L({p},{n})");
            }
        }
    }

    #[test]
    fn literal_table_rows() {
        for p in 3..=6 {
            for n in 0..=3 {
                let pr = params(p, n);
                let a = build_lpn(pr).unwrap();
                for i in 0..=p {
                    let ai = AtomId(pr.a(i));
                    assert_eq!(a.atom_product(ai, ai), 1 | 1 << pr.a(i));
                    for j in (0..=p).filter(|&j| j != i) {
                        let want = pr.a_bits() & !(1 << pr.a(i) | 1 << pr.a(j));
                        assert_eq!(a.atom_product(ai, AtomId(pr.a(j))), want);
                    }
                }
                let tt = a.compose_bits(pr.t_bits(), pr.t_bits());
                match n {
                    0 => assert_eq!(tt, 0),
                    1 => assert_eq!(tt, 1 | pr.a_bits()),
                    _ => assert_eq!(tt & pr.a_bits(), pr.a_bits()),
                }
            }
        }
    }

    #[test]
    fn n_zero_named_elements() {
        let a = build_lpn(params(4, 0)).unwrap();
        assert_eq!(named_t(&a).unwrap(), a.zero());
        assert_eq!(named_a(&a).unwrap(), a.diversity());
    }

    #[test]
    fn fused_products() {
        let f = build_fused(params(3, 2), FusionSpec::new(0, 1).unwrap()).unwrap();
        let alg = &f.algebra;
        let e = |s: &str| alg.parse_element(s).unwrap();
        let comp = |x: &str, y: &str| alg.format(alg.compose(e(x), e(y)).unwrap());
        assert_eq!(comp("a0a1", "a0a1"), "1'+a0a1+a2+a3");
        assert_eq!(comp("a0a1", "a2"), "a0a1+a3");
        assert_eq!(comp("a0a1", "t1"), "t1+t2");
        assert!(f.inclusion.check().ok);
        assert!(check_axioms(alg).all_pass());
    }

    #[test]
    fn fused_table_agrees_through_inclusion() {
        for (p, n, i, j) in [(3, 2, 0, 1), (4, 1, 1, 3), (5, 3, 2, 5), (3, 0, 0, 3)] {
            let f = build_fused(params(p, n), FusionSpec::new(i, j).unwrap()).unwrap();
            let k = f.algebra.atom_count();
            assert_eq!(f.blocks.iter().fold(0, |a, b| a | b), f.parent.universe());
            for x in 0..k {
                for y in 0..k {
                    let inside = f.algebra.atom_product(AtomId(x), AtomId(y));
                    let via = f.inclusion.apply_bits(inside).unwrap();
                    assert_eq!(via, f.parent.compose_bits(f.blocks[x], f.blocks[y]));
                }
            }
        }
    }

    #[test]
    fn fusion_embedding_examples() {
        let e = fusion_embedding(params(3, 2), FusionSpec::new(0, 1).unwrap(), 5).unwrap();
        let src = e.source().clone();
        let tgt = e.target().clone();
        let img = |name: &str| tgt.format_bits(e.apply_bits(src.parse_bits(name).unwrap()).unwrap());
        assert_eq!(img("a0a1"), "a0+a1+a4+a5");
        assert_eq!(img("a2"), "a2");
        assert_eq!(img("a3"), "a3");
        assert_eq!(img("t1"), "t1");
        assert_eq!(img("t2"), "t2");
        assert!(e.check().ok);

        assert!(fusion_embedding(params(3, 0), FusionSpec::new(0, 1).unwrap(), 7).unwrap().check().ok);
        assert!(matches!(
            fusion_embedding(params(5, 1), FusionSpec::new(0, 1).unwrap(), 4),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn degenerate_fusion_is_inclusion() {
        let pr = params(4, 2);
        let spec = FusionSpec::new(1, 2).unwrap();
        let e = fusion_embedding(pr, spec, 4).unwrap();
        let f = build_fused(pr, spec).unwrap();
        let a: Vec<_> = e.atom_images().collect();
        let b: Vec<_> = f.inclusion.atom_images().collect();
        assert_eq!(a, b);
    }

    #[test]
    fn fusion_embeddings_compose() {
        let pr = params(3, 2);
        let spec = FusionSpec::new(0, 2).unwrap();
        let direct = fusion_embedding(pr, spec, 7).unwrap();
        let first = fusion_embedding(pr, spec, 5).unwrap();
        let second = fusion_embedding_from_parent(params(5, 2), spec, 7).unwrap();
        let composed = first.then(&second).unwrap();
        assert!(composed.check().ok);
        let a: Vec<_> = composed.atom_images().collect();
        let b: Vec<_> = direct.atom_images().collect();
        assert_eq!(a, b);
    }

    #[test]
    fn notrap() {
        assert!(notrap_flag(params(3, 2)));
        assert!(!notrap_flag(params(3, 1)));
        assert!(notrap_flag(params(5, 3)));
    }
}
