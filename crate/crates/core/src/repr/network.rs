use serde::Serialize;

use super::{LabeledStructure, StructureKind};
use crate::algebra::AtomId;
use crate::error::{Error, Result};

/// Why an atom labeling is not a weak representation, phrased on triangles
/// of points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum NetworkFailure {
    /// A diagonal pair is not labeled by an identity atom, or an
    /// off-diagonal pair is.
    IdentityMisplaced { u: usize, v: usize },
    ConverseMismatch { u: usize, v: usize },
    /// `λ(u,v) ≰ λ(u,w) ; λ(w,v)`.
    ForbiddenTriangle { u: usize, w: usize, v: usize },
    /// `(u,w)` and `(w,v)` labeled but `(u,v)` not.
    OpenPath { u: usize, w: usize, v: usize },
    /// `λ(u,v) ≤ a ; b` but no `w` has `λ(u,w) = a`, `λ(w,v) = b`.
    MissingWitness { u: usize, v: usize, a: AtomId, b: AtomId },
    /// The atom labels no pair.
    UnusedAtom { atom: AtomId },
}

/// Atom-level check of an atom labeling: identity placement, converse
/// consistency, triangle consistency, closure of labeled paths, witness
/// saturation and use of every atom. Returns the first failure found.
pub fn network_check(s: &LabeledStructure) -> Result<Option<NetworkFailure>> {
    let StructureKind::AtomLabeling(l) = s.kind() else {
        return Err(Error::Usage("network check applies to atom labelings only".into()));
    };
    let alg = s.algebra();
    let d = l.base_size();
    let k = alg.atom_count();
    let is_id = |a: AtomId| alg.identity_bits() >> a.0 & 1 == 1;
    let mut used = vec![false; k];
    for u in 0..d {
        for v in 0..d {
            match l.get(u, v) {
                Some(a) => {
                    used[a.0] = true;
                    if is_id(a) != (u == v) {
                        return Ok(Some(NetworkFailure::IdentityMisplaced { u, v }));
                    }
                    if l.get(v, u) != Some(alg.converse_atom(a)) {
                        return Ok(Some(NetworkFailure::ConverseMismatch { u, v }));
                    }
                }
                None if u == v => return Ok(Some(NetworkFailure::IdentityMisplaced { u, v })),
                None => {
                    if l.get(v, u).is_some() {
                        return Ok(Some(NetworkFailure::ConverseMismatch { u, v }));
                    }
                }
            }
        }
    }
    for u in 0..d {
        for w in 0..d {
            let Some(a) = l.get(u, w) else { continue };
            for v in 0..d {
                let Some(b) = l.get(w, v) else { continue };
                match l.get(u, v) {
                    None => return Ok(Some(NetworkFailure::OpenPath { u, w, v })),
                    Some(c) if alg.atom_product(a, b) >> c.0 & 1 == 0 => {
                        return Ok(Some(NetworkFailure::ForbiddenTriangle { u, w, v }))
                    }
                    _ => {}
                }
            }
        }
    }
    for u in 0..d {
        for v in 0..d {
            let Some(c) = l.get(u, v) else { continue };
            for a in (0..k).map(AtomId) {
                for b in (0..k).map(AtomId) {
                    if alg.atom_product(a, b) >> c.0 & 1 == 1
                        && !(0..d).any(|w| l.get(u, w) == Some(a) && l.get(w, v) == Some(b))
                    {
                        return Ok(Some(NetworkFailure::MissingWitness { u, v, a, b }));
                    }
                }
            }
        }
    }
    if let Some(a) = used.iter().position(|&x| !x) {
        return Ok(Some(NetworkFailure::UnusedAtom { atom: AtomId(a) }));
    }
    Ok(None)
}
