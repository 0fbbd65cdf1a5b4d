//! Finite relation algebras given by an atom table.
//!
//! An algebra is a set of at most 64 atoms together with the identity atoms,
//! a converse permutation and the composition table on atom pairs. Every
//! element is a set of atoms, stored as a `u64` bitset; composition of
//! arbitrary elements is the additive extension of the atom table.

mod axioms;
mod embedding;
mod subalgebra;

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lpn::LpnParams;

pub use axioms::{check_axioms, AxiomOutcome, AxiomReport, AxiomWitness};
pub use embedding::{check_embedding, identity_embedding, Embedding, EmbeddingFailure, EmbeddingVerdict};
pub use subalgebra::{generate_subalgebra, SubalgebraDescription};

/// Largest supported atom count (elements are `u64` bitsets).
pub const MAX_ATOMS: usize = 64;

static NEXT_ALGEBRA_ID: AtomicU64 = AtomicU64::new(1);

/// Index of an atom. In every algebra built by this crate index 0 is the
/// identity atom.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct AtomId(pub usize);

/// An element of a specific algebra: a set of its atoms.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Element {
    algebra: u64,
    bits: u64,
}

impl Element {
    pub fn bits(self) -> u64 {
        self.bits
    }

    pub fn algebra_id(self) -> u64 {
        self.algebra
    }

    pub fn is_zero(self) -> bool {
        self.bits == 0
    }

    pub fn contains(self, atom: AtomId) -> bool {
        atom.0 < 64 && self.bits >> atom.0 & 1 == 1
    }

    pub fn atoms(self) -> impl Iterator<Item = AtomId> {
        bit_indices(self.bits).map(AtomId)
    }

    /// `self ≤ other` in the boolean order.
    pub fn le(self, other: Element) -> bool {
        self.bits & !other.bits == 0
    }
}

/// Indices of the set bits of `bits`, ascending.
pub fn bit_indices(mut bits: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if bits == 0 {
            None
        } else {
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(i)
        }
    })
}

/// A finite relation algebra, immutable after construction.
#[derive(Clone, Debug)]
pub struct FiniteRelationAlgebra {
    id: u64,
    names: Vec<String>,
    identity: u64,
    converse: Vec<usize>,
    table: Vec<u64>,
    lpn: Option<LpnParams>,
}

impl PartialEq for FiniteRelationAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names
            && self.identity == other.identity
            && self.converse == other.converse
            && self.table == other.table
    }
}

impl Eq for FiniteRelationAlgebra {}

impl FiniteRelationAlgebra {
    /// Builds an algebra from its atom table. `table[a * k + b]` is the
    /// bitset of `a ; b`. Only shape is validated here; use
    /// [`check_axioms`] for the relation-algebra laws.
    pub fn new(
        names: Vec<String>,
        identity_atoms: &[usize],
        converse: Vec<usize>,
        table: Vec<u64>,
    ) -> Result<Self> {
        let k = names.len();
        if k == 0 || k > MAX_ATOMS {
            return Err(Error::Parameter(format!(
                "atom count {k} outside 1..={MAX_ATOMS}"
            )));
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::Parameter(format!("duplicate atom name {n:?}")));
            }
        }
        if converse.len() != k || table.len() != k * k {
            return Err(Error::Parameter("converse or table has wrong size".into()));
        }
        let mut seen = vec![false; k];
        for &c in &converse {
            if c >= k || seen[c] {
                return Err(Error::Parameter("converse is not a permutation".into()));
            }
            seen[c] = true;
        }
        let universe = universe_bits(k);
        if table.iter().any(|&t| t & !universe != 0) {
            return Err(Error::Parameter("table entry outside atom universe".into()));
        }
        let mut identity = 0u64;
        for &i in identity_atoms {
            if i >= k {
                return Err(Error::Parameter(format!("identity atom {i} out of range")));
            }
            identity |= 1 << i;
        }
        if identity == 0 {
            return Err(Error::Parameter("no identity atom".into()));
        }
        Ok(FiniteRelationAlgebra {
            id: NEXT_ALGEBRA_ID.fetch_add(1, Ordering::Relaxed),
            names,
            identity,
            converse,
            table,
            lpn: None,
        })
    }

    pub(crate) fn with_lpn(mut self, params: LpnParams) -> Self {
        self.lpn = Some(params);
        self
    }

    /// The `(p, n)` parameters when this algebra is a member of the L(p,n) family.
    pub fn lpn_params(&self) -> Option<LpnParams> {
        self.lpn
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn atom_count(&self) -> usize {
        self.names.len()
    }

    pub fn atom_names(&self) -> &[String] {
        &self.names
    }

    pub fn atom_name(&self, a: AtomId) -> &str {
        &self.names[a.0]
    }

    pub fn atom_by_name(&self, name: &str) -> Option<AtomId> {
        self.names.iter().position(|n| n == name).map(AtomId)
    }

    /// Number of elements, `2^k`, when it fits in a `u64`.
    pub fn element_count(&self) -> Option<u64> {
        1u64.checked_shl(self.atom_count() as u32)
    }

    /// Bitset of all atoms.
    pub fn universe(&self) -> u64 {
        universe_bits(self.atom_count())
    }

    pub fn identity_bits(&self) -> u64 {
        self.identity
    }

    pub fn identity_atoms(&self) -> impl Iterator<Item = AtomId> + '_ {
        bit_indices(self.identity).map(AtomId)
    }

    pub fn is_integral(&self) -> bool {
        self.identity.count_ones() == 1
    }

    pub fn is_symmetric(&self) -> bool {
        self.converse.iter().enumerate().all(|(i, &c)| i == c)
    }

    pub fn converse_atom(&self, a: AtomId) -> AtomId {
        AtomId(self.converse[a.0])
    }

    /// `a ; b` for atoms, as a bitset.
    pub fn atom_product(&self, a: AtomId, b: AtomId) -> u64 {
        self.table[a.0 * self.atom_count() + b.0]
    }

    /// Wraps a bitset as an element, checking it lies in the universe.
    pub fn element(&self, bits: u64) -> Result<Element> {
        if bits & !self.universe() != 0 {
            return Err(Error::Usage(format!(
                "bitset {bits:#x} has atoms outside this algebra"
            )));
        }
        Ok(self.wrap(bits))
    }

    pub(crate) fn wrap(&self, bits: u64) -> Element {
        Element {
            algebra: self.id,
            bits,
        }
    }

    pub fn atom(&self, a: AtomId) -> Element {
        self.wrap(1 << a.0)
    }

    pub fn zero(&self) -> Element {
        self.wrap(0)
    }

    pub fn one(&self) -> Element {
        self.wrap(self.universe())
    }

    pub fn identity(&self) -> Element {
        self.wrap(self.identity)
    }

    /// The diversity element `0'`, the complement of the identity.
    pub fn diversity(&self) -> Element {
        self.wrap(self.universe() & !self.identity)
    }

    fn check_own(&self, x: Element) -> Result<()> {
        if x.algebra != self.id {
            return Err(Error::Usage(
                "element belongs to a different algebra".to_string(),
            ));
        }
        Ok(())
    }

    pub fn join(&self, x: Element, y: Element) -> Result<Element> {
        self.check_own(x)?;
        self.check_own(y)?;
        Ok(self.wrap(x.bits | y.bits))
    }

    pub fn meet(&self, x: Element, y: Element) -> Result<Element> {
        self.check_own(x)?;
        self.check_own(y)?;
        Ok(self.wrap(x.bits & y.bits))
    }

    pub fn complement(&self, x: Element) -> Result<Element> {
        self.check_own(x)?;
        Ok(self.wrap(self.universe() & !x.bits))
    }

    pub fn converse(&self, x: Element) -> Result<Element> {
        self.check_own(x)?;
        Ok(self.wrap(self.converse_bits(x.bits)))
    }

    pub fn compose(&self, x: Element, y: Element) -> Result<Element> {
        self.check_own(x)?;
        self.check_own(y)?;
        Ok(self.wrap(self.compose_bits(x.bits, y.bits)))
    }

    /// Converse of a bitset, atomwise through the converse permutation.
    pub fn converse_bits(&self, x: u64) -> u64 {
        bit_indices(x).fold(0, |acc, a| acc | 1 << self.converse[a])
    }

    /// Composition of bitsets: the union of `a ; b` over atoms `a ∈ x`, `b ∈ y`.
    pub fn compose_bits(&self, x: u64, y: u64) -> u64 {
        let k = self.atom_count();
        let mut acc = 0u64;
        for a in bit_indices(x) {
            let row = &self.table[a * k..(a + 1) * k];
            for b in bit_indices(y) {
                acc |= row[b];
            }
        }
        acc
    }

    pub fn complement_bits(&self, x: u64) -> u64 {
        self.universe() & !x
    }

    /// Renders an element as an atom sum such as `a0+t1`, or `0`.
    pub fn format_bits(&self, x: u64) -> String {
        if x == 0 {
            return "0".to_string();
        }
        bit_indices(x)
            .map(|i| self.names[i].as_str())
            .collect::<Vec<_>>()
            .join("+")
    }

    pub fn format(&self, x: Element) -> String {
        self.format_bits(x.bits)
    }

    /// Parses an atom sum written as by [`format_bits`](Self::format_bits).
    pub fn parse_bits(&self, s: &str) -> Result<u64> {
        let s = s.trim();
        if s == "0" {
            return Ok(0);
        }
        let mut bits = 0u64;
        for part in s.split('+') {
            let part = part.trim();
            let a = self
                .atom_by_name(part)
                .ok_or_else(|| Error::parse(0, format!("unknown atom {part:?}")))?;
            bits |= 1 << a.0;
        }
        Ok(bits)
    }

    pub fn parse_element(&self, s: &str) -> Result<Element> {
        Ok(self.wrap(self.parse_bits(s)?))
    }

    /// The algebra whose atoms are the atoms of a subalgebra of `self`.
    /// Atom names are supplied by the caller, one per subalgebra atom.
    pub fn from_subalgebra(
        &self,
        sub: &SubalgebraDescription,
        names: Vec<String>,
    ) -> Result<FiniteRelationAlgebra> {
        self.from_blocks(sub.atoms(), names)
    }

    /// Like [`from_subalgebra`](Self::from_subalgebra) with the blocks in a
    /// caller-chosen order. The blocks must partition the unit and be closed
    /// under converse and composition.
    pub fn from_blocks(&self, blocks: &[u64], names: Vec<String>) -> Result<FiniteRelationAlgebra> {
        SubalgebraDescription::from_atoms(blocks.to_vec(), self.universe())?;
        if names.len() != blocks.len() {
            return Err(Error::Usage("one name per subalgebra atom required".into()));
        }
        let to_sub = |bits: u64| -> Result<u64> {
            let mut out = 0u64;
            let mut rest = bits;
            for (i, &b) in blocks.iter().enumerate() {
                if b & bits == b {
                    out |= 1 << i;
                    rest &= !b;
                } else if b & bits != 0 {
                    return Err(Error::Usage("blocks are not closed under the operations".into()));
                }
            }
            debug_assert_eq!(rest, 0);
            Ok(out)
        };
        let k = blocks.len();
        let mut table = vec![0u64; k * k];
        for i in 0..k {
            for j in 0..k {
                table[i * k + j] = to_sub(self.compose_bits(blocks[i], blocks[j]))?;
            }
        }
        let mut converse = Vec::with_capacity(k);
        for &b in blocks {
            let c = self.converse_bits(b);
            let idx = blocks
                .iter()
                .position(|&o| o == c)
                .ok_or_else(|| Error::Usage("converse of a block is not a block".into()))?;
            converse.push(idx);
        }
        let identity: Vec<usize> = (0..k)
            .filter(|&i| blocks[i] & !self.identity == 0)
            .collect();
        FiniteRelationAlgebra::new(names, &identity, converse, table)
    }
}

impl fmt::Display for FiniteRelationAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "relation algebra with {} atoms", self.atom_count())?;
        if let Some(p) = self.lpn {
            write!(f, " (L({},{}))", p.p, p.n)?;
        }
        Ok(())
    }
}

pub(crate) fn universe_bits(k: usize) -> u64 {
    if k >= 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}
