use serde::Serialize;

use super::{bit_indices, Element, FiniteRelationAlgebra};
use crate::error::{Error, Result};

/// A subalgebra, given by its atoms: pairwise disjoint nonzero bitsets of
/// the parent algebra whose union is the parent's `1`. Atoms are sorted by
/// bitset value.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SubalgebraDescription {
    atoms: Vec<u64>,
}

impl SubalgebraDescription {
    /// Wraps a list of blocks. Fails unless they partition `universe`.
    pub fn from_atoms(mut atoms: Vec<u64>, universe: u64) -> Result<Self> {
        atoms.sort_unstable();
        let mut acc = 0u64;
        for &a in &atoms {
            if a == 0 || acc & a != 0 {
                return Err(Error::Usage("subalgebra atoms must be nonzero and disjoint".into()));
            }
            acc |= a;
        }
        if acc != universe {
            return Err(Error::Usage("subalgebra atoms must cover the unit".into()));
        }
        Ok(SubalgebraDescription { atoms })
    }

    /// The whole algebra, every atom its own block.
    pub fn full(alg: &FiniteRelationAlgebra) -> Self {
        SubalgebraDescription {
            atoms: bit_indices(alg.universe()).map(|i| 1u64 << i).collect(),
        }
    }

    pub fn atoms(&self) -> &[u64] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Indices of the blocks whose union is `bits`, or `None` when `bits`
    /// is not an element of the subalgebra.
    pub fn decompose(&self, bits: u64) -> Option<Vec<usize>> {
        let mut rest = bits;
        let mut out = Vec::new();
        for (i, &a) in self.atoms.iter().enumerate() {
            if a & bits == a {
                out.push(i);
                rest &= !a;
            } else if a & bits != 0 {
                return None;
            }
        }
        (rest == 0).then_some(out)
    }

    pub fn contains(&self, bits: u64) -> bool {
        self.decompose(bits).is_some()
    }

    /// All elements of the subalgebra, ascending by subset index.
    /// Caller keeps `len()` small.
    pub fn elements(&self) -> Vec<u64> {
        let k = self.atoms.len();
        assert!(k < 32, "subalgebra too large to enumerate");
        (0u64..1 << k)
            .map(|mask| bit_indices(mask).fold(0u64, |acc, i| acc | self.atoms[i]))
            .collect()
    }
}

/// Splits every block by `x`.
fn refine(blocks: &mut Vec<u64>, x: u64) -> bool {
    let mut changed = false;
    let mut out = Vec::with_capacity(blocks.len() + 1);
    for &b in blocks.iter() {
        let inside = b & x;
        let outside = b & !x;
        if inside != 0 && outside != 0 {
            out.push(inside);
            out.push(outside);
            changed = true;
        } else {
            out.push(b);
        }
    }
    *blocks = out;
    changed
}

/// The subalgebra generated by `gens`: the least set containing them and
/// closed under the boolean operations, `1'`, converse and composition.
///
/// Computed as a fixpoint on the partition of the parent's atoms into
/// subalgebra atoms: start from the partition cut out by the generators and
/// the identity, then repeatedly split by converses of blocks and products
/// of block pairs. By additivity a partition stable under these splits is
/// the atom set of a closed subalgebra, and every split is forced.
pub fn generate_subalgebra(
    alg: &FiniteRelationAlgebra,
    gens: &[Element],
) -> Result<SubalgebraDescription> {
    if gens.is_empty() {
        return Err(Error::Usage("at least one generator required".into()));
    }
    for g in gens {
        alg.check_own(*g)?;
    }
    let mut blocks = vec![alg.universe()];
    refine(&mut blocks, alg.identity_bits());
    for g in gens {
        refine(&mut blocks, g.bits());
    }
    loop {
        let mut changed = false;
        let snapshot = blocks.clone();
        for &b in &snapshot {
            changed |= refine(&mut blocks, alg.converse_bits(b));
        }
        for &b1 in &snapshot {
            for &b2 in &snapshot {
                changed |= refine(&mut blocks, alg.compose_bits(b1, b2));
            }
        }
        if !changed {
            break;
        }
    }
    blocks.sort_unstable();
    Ok(SubalgebraDescription { atoms: blocks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lpn::{build_lpn, LpnParams};
    use std::collections::BTreeSet;

    fn l32() -> FiniteRelationAlgebra {
        build_lpn(LpnParams::new(3, 2).unwrap()).unwrap()
    }

    /// Naive closure over the full element set: keep applying every
    /// operation to every pair until nothing new appears.
    fn naive_closure(alg: &FiniteRelationAlgebra, gens: &[u64]) -> BTreeSet<u64> {
        let mut set: BTreeSet<u64> = gens.iter().copied().collect();
        set.extend([0, alg.universe(), alg.identity_bits()]);
        loop {
            let cur: Vec<u64> = set.iter().copied().collect();
            let before = set.len();
            for &x in &cur {
                set.insert(alg.complement_bits(x));
                set.insert(alg.converse_bits(x));
                for &y in &cur {
                    set.insert(x | y);
                    set.insert(x & y);
                    set.insert(alg.compose_bits(x, y));
                }
            }
            if set.len() == before {
                return set;
            }
        }
    }

    #[test]
    fn minimal_subalgebra() {
        let a = l32();
        let s = generate_subalgebra(&a, &[a.identity()]).unwrap();
        let names: Vec<String> = s.atoms().iter().map(|&b| a.format_bits(b)).collect();
        assert_eq!(names, vec!["1'", "a0+a1+a2+a3+t1+t2"]);
    }

    #[test]
    fn generated_by_a0() {
        let a = l32();
        let s = generate_subalgebra(&a, &[a.parse_element("a0").unwrap()]).unwrap();
        let names: Vec<String> = s.atoms().iter().map(|&b| a.format_bits(b)).collect();
        assert_eq!(names, vec!["1'", "a0", "a1+a2+a3+t1+t2"]);
        assert!(!s.contains(a.parse_bits("t1+t2").unwrap()));
        let naive = naive_closure(&a, &[a.parse_bits("a0").unwrap()]);
        let ours: BTreeSet<u64> = s.elements().into_iter().collect();
        assert_eq!(ours, naive);
    }

    #[test]
    fn agrees_with_naive_closure() {
        let a = l32();
        let gens_list: [&[&str]; 4] = [
            &["a0+t1"],
            &["a0+a1", "t2"],
            &["a0+a1+t1"],
            &["1'+a3", "a1+a2"],
        ];
        for gens in gens_list {
            let bits: Vec<u64> = gens.iter().map(|g| a.parse_bits(g).unwrap()).collect();
            let elems: Vec<Element> = bits.iter().map(|&b| a.element(b).unwrap()).collect();
            let s = generate_subalgebra(&a, &elems).unwrap();
            let ours: BTreeSet<u64> = s.elements().into_iter().collect();
            assert_eq!(ours, naive_closure(&a, &bits), "{gens:?}");
        }
    }

    #[test]
    fn closure_is_closed() {
        let a = l32();
        let s = generate_subalgebra(&a, &[a.parse_element("a0+t1").unwrap()]).unwrap();
        let els = s.elements();
        for &x in &els {
            assert!(s.contains(a.converse_bits(x)));
            assert!(s.contains(a.complement_bits(x)));
            for &y in &els {
                assert!(s.contains(a.compose_bits(x, y)));
            }
        }
    }

    #[test]
    fn empty_generators_rejected() {
        assert!(generate_subalgebra(&l32(), &[]).is_err());
    }
}
