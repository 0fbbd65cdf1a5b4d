//! Generic verifiers for label-generated structures.
//!
//! With `image(x) = {(u,v) : λ(u,v) ≤ x}` the clauses reduce to statements
//! about single pairs of points:
//!
//! * `image(0) = ∅` and `image(x·y) = image(x) ∩ image(y)` hold for every
//!   label-generated structure, since labels are nonzero and `λ ≤ x·y` iff
//!   `λ ≤ x` and `λ ≤ y`.
//! * `image(1')` is the diagonal iff `λ(u,v) ≤ 1'` exactly when `u = v`.
//! * `image(x˘)` is the transpose of `image(x)` for all `x` iff
//!   `λ(v,u) = λ(u,v)˘` for every pair (both undefined allowed).
//! * For composition let `S(u,v)` be the set of label pairs `(L,M)` with a
//!   point `w` such that `λ(u,w) = L` and `λ(w,v) = M`. Then `(u,v)` lies in
//!   `image(x)·image(y)` iff some `(L,M) ∈ S(u,v)` has `L ≤ x` and `M ≤ y`.
//!   The pairs are grouped by `(λ(u,v), u = v, S(u,v))` and every group is
//!   checked against every element pair `(x, y)` of the algebra. When all
//!   labels are atoms both sides are additive in `x` and in `y`, so atom
//!   pairs suffice and only those are enumerated.
//! * Images are pairwise distinct iff every atom occurs as a label: if atom
//!   `a` never does, `image(a) = image(0)`.
//! * `image(1)` is everything iff every pair is labeled, and
//!   `image(x‾) = U ∖ image(x)` for all `x` iff in addition every label is
//!   an atom (a label with two atoms lies in neither side for `x` one of
//!   them).

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use super::{BitMatrix, LabeledStructure};
use crate::algebra::bit_indices;
use crate::error::{Error, Result};

/// Limits for generic verification. Overridable with the environment
/// variables `LPN_MAX_BASE` and `LPN_MAX_ELEMENT_PAIRS`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_base: usize,
    pub max_element_pairs: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_base: 4096,
            max_element_pairs: 1 << 26,
        }
    }
}

impl Budget {
    pub fn from_env() -> Self {
        let mut b = Budget::default();
        if let Some(v) = std::env::var("LPN_MAX_BASE").ok().and_then(|s| s.parse().ok()) {
            b.max_base = v;
        }
        if let Some(v) = std::env::var("LPN_MAX_ELEMENT_PAIRS").ok().and_then(|s| s.parse().ok()) {
            b.max_element_pairs = v;
        }
        b
    }

    pub(crate) fn check_base(&self, d: usize) -> Result<()> {
        if d > self.max_base {
            return Err(Error::Resource(format!(
                "base of {d} points exceeds the limit of {} (LPN_MAX_BASE)",
                self.max_base
            )));
        }
        Ok(())
    }

    fn check_atoms(&self, k: usize) -> Result<()> {
        if 2 * k >= 64 || 1u64 << (2 * k) > self.max_element_pairs {
            return Err(Error::Resource(format!(
                "{k} atoms give 4^{k} element pairs, limit is {} (LPN_MAX_ELEMENT_PAIRS)",
                self.max_element_pairs
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Clause {
    Zero,
    Identity,
    Converse,
    Meet,
    Composition,
    Injective,
    Unit,
    Complement,
}

impl std::fmt::Display for Clause {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Clause::Zero => "image(0) = empty",
            Clause::Identity => "image(1') = diagonal",
            Clause::Converse => "image(x~) = transpose(image(x))",
            Clause::Meet => "image(x&y) = image(x) & image(y)",
            Clause::Composition => "image(x;y) = image(x) image(y)",
            Clause::Injective => "distinct elements have distinct images",
            Clause::Unit => "image(1) = all pairs",
            Clause::Complement => "image(-x) = complement of image(x)",
        };
        f.write_str(s)
    }
}

/// The first violated clause with its element(s) and, where one exists, a
/// pair of points on which the two sides differ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub clause: Clause,
    pub x: u64,
    pub y: Option<u64>,
    pub points: Option<(usize, usize)>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub pass: bool,
    pub base_size: usize,
    /// Element pairs enumerated for the composition clause.
    pub element_pairs: u64,
    pub failure: Option<Failure>,
}

impl Verdict {
    fn pass(s: &LabeledStructure, pairs: u64) -> Self {
        Verdict {
            pass: true,
            base_size: s.base_size(),
            element_pairs: pairs,
            failure: None,
        }
    }

    fn fail(s: &LabeledStructure, pairs: u64, f: Failure) -> Self {
        Verdict {
            pass: false,
            base_size: s.base_size(),
            element_pairs: pairs,
            failure: Some(f),
        }
    }

    /// One-line summary using the algebra's atom names.
    pub fn summary(&self, s: &LabeledStructure) -> String {
        match &self.failure {
            None => format!("PASS on {} points", self.base_size),
            Some(f) => {
                let alg = s.algebra();
                let mut out = format!("FAIL {}: x={}", f.clause, alg.format_bits(f.x));
                if let Some(y) = f.y {
                    out += &format!(" y={}", alg.format_bits(y));
                }
                if let Some((u, v)) = f.points {
                    out += &format!(" at ({u},{v})");
                }
                if !f.detail.is_empty() {
                    out += &format!("; {}", f.detail);
                }
                out
            }
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct Signature {
    label: u64,
    diagonal: bool,
    /// Sorted label-index pairs `(L, M)` witnessed through some point.
    witnessed: Vec<(u16, u16)>,
}

struct Tables {
    d: usize,
    labels: Vec<u64>,
    /// Distinct nonzero labels, ascending.
    distinct: Vec<u64>,
}

impl Tables {
    fn new(s: &LabeledStructure, budget: &Budget) -> Result<Self> {
        let labels = s.label_table(budget)?;
        let mut distinct: Vec<u64> = labels.iter().copied().filter(|&l| l != 0).collect();
        distinct.sort_unstable();
        distinct.dedup();
        if distinct.len() > u16::MAX as usize {
            return Err(Error::Resource("too many distinct labels".into()));
        }
        Ok(Tables {
            d: s.base_size(),
            labels,
            distinct,
        })
    }

    fn label(&self, u: usize, v: usize) -> u64 {
        self.labels[u * self.d + v]
    }
}

fn identity_clause(s: &LabeledStructure, t: &Tables) -> Option<Failure> {
    let id = s.algebra().identity_bits();
    for u in 0..t.d {
        for v in 0..t.d {
            let l = t.label(u, v);
            let inside = l != 0 && l & !id == 0;
            if inside != (u == v) {
                return Some(Failure {
                    clause: Clause::Identity,
                    x: id,
                    y: None,
                    points: Some((u, v)),
                    detail: if inside {
                        "off-diagonal pair in image(1')".into()
                    } else {
                        "diagonal pair missing from image(1')".into()
                    },
                });
            }
        }
    }
    None
}

fn converse_clause(s: &LabeledStructure, t: &Tables) -> Option<Failure> {
    let alg = s.algebra();
    for u in 0..t.d {
        for v in 0..t.d {
            let (l, r) = (t.label(u, v), t.label(v, u));
            let expected = alg.converse_bits(l);
            if r != expected {
                // One of these two elements separates the sides at (u,v).
                let x = if r != 0 && (l == 0 || l & !alg.converse_bits(r) != 0) {
                    r
                } else {
                    expected
                };
                return Some(Failure {
                    clause: Clause::Converse,
                    x,
                    y: None,
                    points: Some((u, v)),
                    detail: "labels of (u,v) and (v,u) are not converse".into(),
                });
            }
        }
    }
    None
}

fn signatures(t: &Tables) -> Vec<(Signature, (usize, usize))> {
    let d = t.d;
    let index: HashMap<u64, u16> = t.distinct.iter().enumerate().map(|(i, &l)| (l, i as u16)).collect();
    let mut by_label = vec![BitMatrix::zeros(d); t.distinct.len()];
    for u in 0..d {
        for v in 0..d {
            let l = t.label(u, v);
            if l != 0 {
                by_label[index[&l] as usize].set(u, v);
            }
        }
    }
    let transposed: Vec<BitMatrix> = by_label.iter().map(BitMatrix::transpose).collect();
    let per_row: Vec<HashMap<Signature, (usize, usize)>> = (0..d)
        .into_par_iter()
        .map(|u| {
            let mut map = HashMap::new();
            let out_labels: Vec<usize> = (0..by_label.len())
                .filter(|&li| by_label[li].row(u).iter().any(|&w| w != 0))
                .collect();
            for v in 0..d {
                let mut witnessed = Vec::new();
                for &li in &out_labels {
                    let row = by_label[li].row(u);
                    for (mi, col) in transposed.iter().enumerate() {
                        if row.iter().zip(col.row(v)).any(|(a, b)| a & b != 0) {
                            witnessed.push((li as u16, mi as u16));
                        }
                    }
                }
                let sig = Signature {
                    label: t.label(u, v),
                    diagonal: u == v,
                    witnessed,
                };
                map.entry(sig).or_insert((u, v));
            }
            map
        })
        .collect();
    let mut merged: HashMap<Signature, (usize, usize)> = HashMap::new();
    for m in per_row {
        for (sig, at) in m {
            let e = merged.entry(sig).or_insert(at);
            if at < *e {
                *e = at;
            }
        }
    }
    let mut out: Vec<_> = merged.into_iter().collect();
    out.sort_by_key(|(_, at)| *at);
    out
}

/// Number of element pairs the composition clause enumerates.
fn composition_pairs(s: &LabeledStructure, t: &Tables) -> u64 {
    let k = s.algebra().atom_count() as u32;
    if t.distinct.iter().all(|l| l.count_ones() == 1) {
        (k * k) as u64
    } else {
        1u64 << (2 * k)
    }
}

fn composition_clause(s: &LabeledStructure, t: &Tables) -> Option<Failure> {
    let alg = s.algebra();
    let k = alg.atom_count();
    let sigs = signatures(t);
    let atom_labels = t.distinct.iter().all(|l| l.count_ones() == 1);
    let candidates: Vec<u64> = if atom_labels {
        (0..k).map(|a| 1u64 << a).collect()
    } else {
        (0..1u64 << k).collect()
    };
    candidates.par_iter().find_map_first(|&x| {
        let xrow: Vec<u64> = (0..k).map(|b| alg.compose_bits(x, 1 << b)).collect();
        // For each signature: labels M reachable through some L ≤ x.
        let reach: Vec<(u64, Vec<u64>)> = sigs
            .iter()
            .map(|(sig, _)| {
                let mut mask = 0u64;
                let mut multi = Vec::new();
                for &(li, mi) in &sig.witnessed {
                    if t.distinct[li as usize] & !x == 0 {
                        let m = t.distinct[mi as usize];
                        if atom_labels {
                            mask |= m;
                        } else if !multi.contains(&m) {
                            multi.push(m);
                        }
                    }
                }
                (mask, multi)
            })
            .collect();
        for &y in &candidates {
            let comp = bit_indices(y).fold(0, |acc, b| acc | xrow[b]);
            for ((sig, at), (mask, multi)) in sigs.iter().zip(&reach) {
                let lhs = sig.label != 0 && sig.label & !comp == 0;
                let rhs = mask & y != 0 || multi.iter().any(|m| m & !y == 0);
                if lhs != rhs {
                    return Some(Failure {
                        clause: Clause::Composition,
                        x,
                        y: Some(y),
                        points: Some(*at),
                        detail: if lhs {
                            "pair in image(x;y) has no witness point".into()
                        } else {
                            "witnessed pair missing from image(x;y)".into()
                        },
                    });
                }
            }
        }
        None
    })
}

fn injective_clause(s: &LabeledStructure, t: &Tables) -> Option<Failure> {
    let alg = s.algebra();
    (0..alg.atom_count())
        .find(|&a| !t.distinct.contains(&(1u64 << a)))
        .map(|a| Failure {
            clause: Clause::Injective,
            x: 1 << a,
            y: Some(0),
            points: None,
            detail: format!("atom {} labels no pair, so its image is empty", alg.atom_names()[a]),
        })
}

/// Checks that `s` is a weak representation: it preserves `0`, meets,
/// `1'`, converse and composition for all element pairs, and is injective.
pub fn verify_weak(s: &LabeledStructure, budget: &Budget) -> Result<Verdict> {
    let t = Tables::new(s, budget)?;
    if t.distinct.iter().any(|l| l.count_ones() > 1) {
        budget.check_atoms(s.algebra().atom_count())?;
    }
    let pairs = composition_pairs(s, &t);
    let failure = identity_clause(s, &t)
        .or_else(|| converse_clause(s, &t))
        .or_else(|| composition_clause(s, &t))
        .or_else(|| injective_clause(s, &t));
    Ok(match failure {
        None => Verdict::pass(s, pairs),
        Some(f) => Verdict::fail(s, pairs, f),
    })
}

/// [`verify_weak`] plus `image(1) = D×D` and `image(x‾) = D×D ∖ image(x)`.
pub fn verify_full(s: &LabeledStructure, budget: &Budget) -> Result<Verdict> {
    let weak = verify_weak(s, budget)?;
    if !weak.pass {
        return Ok(weak);
    }
    let t = Tables::new(s, budget)?;
    let alg = s.algebra();
    let pairs = weak.element_pairs;
    for u in 0..t.d {
        for v in 0..t.d {
            let l = t.label(u, v);
            if l == 0 {
                return Ok(Verdict::fail(
                    s,
                    pairs,
                    Failure {
                        clause: Clause::Unit,
                        x: alg.universe(),
                        y: None,
                        points: Some((u, v)),
                        detail: "pair lies in no image".into(),
                    },
                ));
            }
            if l.count_ones() > 1 {
                let x = l & l.wrapping_neg();
                return Ok(Verdict::fail(
                    s,
                    pairs,
                    Failure {
                        clause: Clause::Complement,
                        x,
                        y: None,
                        points: Some((u, v)),
                        detail: format!(
                            "pair lies in no atom image (least element containing it is {}), so it is in neither image(x) nor image(-x)",
                            alg.format_bits(l)
                        ),
                    },
                ));
            }
        }
    }
    Ok(weak)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AtomId;
    use crate::lpn::{build_lpn_arc, LpnParams};
    use crate::repr::{build_affine, build_doubled, build_power, AtomLabeling};
    use std::sync::Arc;

    /// Matrix-level oracle: materialize every image and compare both sides
    /// of every clause for every element pair.
    pub(crate) fn naive_verify(s: &LabeledStructure, full: bool) -> bool {
        let alg = s.algebra();
        let b = Budget::default();
        let k = alg.atom_count();
        let imgs: Vec<BitMatrix> = (0..1u64 << k).map(|x| s.image_bits(x, &b).unwrap()).collect();
        let d = s.base_size();
        if !imgs[0].is_empty() || imgs[alg.identity_bits() as usize] != BitMatrix::identity(d) {
            return false;
        }
        for x in 0..imgs.len() {
            if imgs[alg.converse_bits(x as u64) as usize] != imgs[x].transpose() {
                return false;
            }
            if full && imgs[alg.complement_bits(x as u64) as usize] != imgs[x].complement() {
                return false;
            }
            for y in 0..imgs.len() {
                if x < y && imgs[x] == imgs[y] {
                    return false;
                }
                if imgs[x & y] != imgs[x].intersection(&imgs[y]) {
                    return false;
                }
                if imgs[alg.compose_bits(x as u64, y as u64) as usize] != imgs[x].product(&imgs[y]) {
                    return false;
                }
            }
        }
        !full || imgs[alg.universe() as usize] == BitMatrix::full(d)
    }

    #[test]
    fn affine_and_doubled_pass() {
        let b = Budget::default();
        for s in [build_affine(3).unwrap(), build_doubled(3).unwrap()] {
            assert!(verify_weak(&s, &b).unwrap().pass);
            assert!(verify_full(&s, &b).unwrap().pass);
            assert!(naive_verify(&s, true));
        }
    }

    #[test]
    fn power_is_weak_not_full() {
        let b = Budget::default();
        let p = build_power(Arc::new(build_affine(3).unwrap()), 2).unwrap();
        assert!(verify_weak(&p, &b).unwrap().pass);
        let full = verify_full(&p, &b).unwrap();
        let f = full.failure.unwrap();
        assert_eq!(f.clause, Clause::Complement);
        let (u, v) = f.points.unwrap();
        let alg = p.algebra();
        for a in 0..alg.atom_count() {
            assert!(!p.image(alg.atom(AtomId(a))).unwrap().get(u, v));
        }
    }

    #[test]
    fn two_point_a0_labeling_fails() {
        let alg = build_lpn_arc(LpnParams::new(3, 0).unwrap()).unwrap();
        let mut l = AtomLabeling::new(&alg, 2).unwrap();
        l.set(&alg, 0, 1, AtomId(1)).unwrap();
        let s = LabeledStructure::from_labeling(alg, l);
        let v = verify_weak(&s, &Budget::default()).unwrap();
        assert_eq!(v.failure.unwrap().clause, Clause::Composition);
        assert!(!naive_verify(&s, false));
    }

    #[test]
    fn budget_refuses_large_bases() {
        let s = build_affine(3).unwrap();
        let tight = Budget {
            max_base: 8,
            ..Budget::default()
        };
        assert!(matches!(verify_weak(&s, &tight), Err(Error::Resource(_))));
    }
}
