//! Square (weak) representations over finite bases.
//!
//! Every structure here is label-generated: each ordered pair of points
//! `(u, v)` carries at most one label `λ(u,v)`, a nonzero element of the
//! algebra, and the image of an element is
//!
//! ```text
//! image(x) = { (u, v) : λ(u,v) ≤ x }
//! ```
//!
//! For an atom labeling the labels are atoms. For the power `θ^m` the label
//! of a pair of tuples is the join of the coordinate labels (undefined if
//! any coordinate is unlabeled), which is exactly the coordinatewise
//! conjunction `(u,v) ∈ x^{θ^m} ⟺ ∀i (u_i,v_i) ∈ x^θ`. For a ξ structure
//! pairs inside `D` or `D'` carry the label of the inner structure and cross
//! pairs carry the atom `t_i` of their class.
//!
//! Weak representations are checked for the signature `0, ·, 1', ˘, ;`
//! plus injectivity; [`verify_full`] adds `1` and complement.

mod audit;
mod bitmatrix;
mod build;
mod network;
mod verify;

use std::sync::Arc;

use crate::algebra::{AtomId, Element, FiniteRelationAlgebra};
use crate::error::{Error, Result};
use crate::xi::Partition;

pub use audit::{degree_audit, AtomDegree, DegreeAudit, LemmaDVerdict};
pub use bitmatrix::BitMatrix;
pub use build::{build_affine, build_doubled, build_power, affine_point, affine_index};
pub use network::{network_check, NetworkFailure};
pub use verify::{verify_full, verify_weak, Budget, Clause, Failure, Verdict};

const UNLABELED: u8 = u8::MAX;

/// Partial atom labeling of the pairs of `0..d`; symmetric up to converse,
/// diagonal labeled by the identity atom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomLabeling {
    d: usize,
    labels: Vec<u8>,
}

impl AtomLabeling {
    /// All off-diagonal pairs unlabeled. The algebra must be integral.
    pub fn new(alg: &FiniteRelationAlgebra, d: usize) -> Result<Self> {
        if !alg.is_integral() {
            return Err(Error::Parameter("atom labelings need an integral algebra".into()));
        }
        let id = alg.identity_bits().trailing_zeros() as u8;
        let mut labels = vec![UNLABELED; d * d];
        for u in 0..d {
            labels[u * d + u] = id;
        }
        Ok(AtomLabeling { d, labels })
    }

    pub fn base_size(&self) -> usize {
        self.d
    }

    /// Labels `(u,v)` with `atom` and `(v,u)` with its converse.
    pub fn set(&mut self, alg: &FiniteRelationAlgebra, u: usize, v: usize, atom: AtomId) -> Result<()> {
        if u >= self.d || v >= self.d || u == v {
            return Err(Error::Parameter(format!("edge {u} {v} invalid for base {}", self.d)));
        }
        if atom.0 >= alg.atom_count() || alg.identity_bits() >> atom.0 & 1 == 1 {
            return Err(Error::Parameter(format!("atom {} cannot label an edge", atom.0)));
        }
        self.labels[u * self.d + v] = atom.0 as u8;
        self.labels[v * self.d + u] = alg.converse_atom(atom).0 as u8;
        Ok(())
    }

    pub fn get(&self, u: usize, v: usize) -> Option<AtomId> {
        match self.labels[u * self.d + v] {
            UNLABELED => None,
            a => Some(AtomId(a as usize)),
        }
    }

    /// Labeled pairs `u < v` with their atoms, row-major.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, AtomId)> + '_ {
        (0..self.d).flat_map(move |u| {
            (u + 1..self.d).filter_map(move |v| self.get(u, v).map(|a| (u, v, a)))
        })
    }
}

#[derive(Clone, Debug)]
pub enum StructureKind {
    AtomLabeling(AtomLabeling),
    /// Points are base-`d` tuples of length `m`, coordinate 0 least significant.
    Power { inner: Arc<LabeledStructure>, m: u32 },
    /// Base `D ∪ D'`: points `0..d` are `D`, `d..2d` the mirrored copy.
    Xi {
        inner: Arc<LabeledStructure>,
        n: usize,
        partition: Partition,
    },
}

#[derive(Clone, Debug)]
pub struct LabeledStructure {
    algebra: Arc<FiniteRelationAlgebra>,
    kind: StructureKind,
    base: usize,
}

impl LabeledStructure {
    pub fn from_labeling(algebra: Arc<FiniteRelationAlgebra>, labeling: AtomLabeling) -> Self {
        LabeledStructure {
            base: labeling.d,
            algebra,
            kind: StructureKind::AtomLabeling(labeling),
        }
    }

    pub(crate) fn power(inner: Arc<LabeledStructure>, m: u32) -> Result<Self> {
        let base = (inner.base as u64)
            .checked_pow(m)
            .filter(|&b| b <= u32::MAX as u64)
            .ok_or_else(|| Error::Resource(format!("base {}^{m} too large", inner.base)))?;
        Ok(LabeledStructure {
            algebra: inner.algebra.clone(),
            kind: StructureKind::Power { inner, m },
            base: base as usize,
        })
    }

    pub(crate) fn xi(
        algebra: Arc<FiniteRelationAlgebra>,
        inner: Arc<LabeledStructure>,
        n: usize,
        partition: Partition,
    ) -> Self {
        LabeledStructure {
            base: 2 * inner.base,
            algebra,
            kind: StructureKind::Xi { inner, n, partition },
        }
    }

    pub fn algebra(&self) -> &Arc<FiniteRelationAlgebra> {
        &self.algebra
    }

    pub fn kind(&self) -> &StructureKind {
        &self.kind
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            StructureKind::AtomLabeling(_) => "atom-labeling",
            StructureKind::Power { .. } => "power",
            StructureKind::Xi { .. } => "xi",
        }
    }

    pub fn base_size(&self) -> usize {
        self.base
    }

    /// The least element whose image contains `(u, v)`, as a bitset, or
    /// `None` when no image contains it.
    pub fn pair_label(&self, u: usize, v: usize) -> Option<u64> {
        match &self.kind {
            StructureKind::AtomLabeling(l) => l.get(u, v).map(|a| 1u64 << a.0),
            StructureKind::Power { inner, m } => {
                let d = inner.base;
                let (mut u, mut v) = (u, v);
                let mut acc = 0u64;
                for _ in 0..*m {
                    acc |= inner.pair_label(u % d, v % d)?;
                    u /= d;
                    v /= d;
                }
                Some(acc)
            }
            StructureKind::Xi { inner, partition, .. } => {
                let d = inner.base;
                let p = self.algebra.lpn_params().expect("xi target is some L(p,n)");
                match (u < d, v < d) {
                    (true, true) => inner.pair_label(u, v),
                    (false, false) => inner.pair_label(u - d, v - d),
                    (true, false) => Some(1u64 << p.t(partition.class(u, v - d))),
                    (false, true) => Some(1u64 << p.t(partition.class(v, u - d))),
                }
            }
        }
    }

    /// `image(x)` as a matrix.
    pub fn image(&self, x: Element) -> Result<BitMatrix> {
        let x = self.algebra.meet(x, x)?.bits();
        self.image_bits(x, &Budget::from_env())
    }

    pub fn image_bits(&self, x: u64, budget: &Budget) -> Result<BitMatrix> {
        budget.check_base(self.base)?;
        let mut m = BitMatrix::zeros(self.base);
        for u in 0..self.base {
            for v in 0..self.base {
                if self.pair_label(u, v).is_some_and(|l| l & !x == 0) {
                    m.set(u, v);
                }
            }
        }
        Ok(m)
    }

    /// Row-major table of all pair labels, `0` for unlabeled.
    pub fn label_table(&self, budget: &Budget) -> Result<Vec<u64>> {
        budget.check_base(self.base)?;
        let d = self.base;
        Ok((0..d * d)
            .map(|i| self.pair_label(i / d, i % d).unwrap_or(0))
            .collect())
    }
}
