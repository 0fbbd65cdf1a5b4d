use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use super::{bit_indices, Element, FiniteRelationAlgebra, SubalgebraDescription};
use crate::error::{Error, Result};

/// An atom map from a subalgebra of `source` into `target`, extended
/// additively to every element of the subalgebra.
#[derive(Clone, Debug)]
pub struct Embedding {
    source: Arc<FiniteRelationAlgebra>,
    domain: SubalgebraDescription,
    target: Arc<FiniteRelationAlgebra>,
    images: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EmbeddingFailure {
    /// A domain atom maps to 0.
    ZeroImage { atom: String },
    /// Two domain atoms have overlapping images, so meets (and injectivity) fail.
    Overlap { first: String, second: String },
    /// Images do not cover the target's `1`.
    NotUnital { covered: String },
    Identity { got: String },
    Converse { atom: String },
    Composition { first: String, second: String, expected: String, got: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbeddingVerdict {
    pub ok: bool,
    pub failure: Option<EmbeddingFailure>,
}

impl Embedding {
    /// `map` sends each domain atom (as a source bitset) to a target bitset.
    pub fn new(
        source: Arc<FiniteRelationAlgebra>,
        domain: SubalgebraDescription,
        target: Arc<FiniteRelationAlgebra>,
        map: &BTreeMap<u64, u64>,
    ) -> Result<Self> {
        let mut images = Vec::with_capacity(domain.len());
        for &atom in domain.atoms() {
            let img = *map.get(&atom).ok_or_else(|| {
                Error::Usage(format!(
                    "map undefined on domain atom {}",
                    source.format_bits(atom)
                ))
            })?;
            if img & !target.universe() != 0 {
                return Err(Error::Usage("image outside target algebra".into()));
            }
            images.push(img);
        }
        Ok(Embedding {
            source,
            domain,
            target,
            images,
        })
    }

    pub fn source(&self) -> &Arc<FiniteRelationAlgebra> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteRelationAlgebra> {
        &self.target
    }

    pub fn domain(&self) -> &SubalgebraDescription {
        &self.domain
    }

    /// `(domain atom, image)` pairs in domain order.
    pub fn atom_images(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.domain.atoms().iter().copied().zip(self.images.iter().copied())
    }

    /// Image of a source bitset, `None` if it is not in the domain.
    pub fn apply_bits(&self, x: u64) -> Option<u64> {
        self.domain
            .decompose(x)
            .map(|idx| idx.iter().fold(0u64, |acc, &i| acc | self.images[i]))
    }

    pub fn apply(&self, x: Element) -> Result<Element> {
        self.source.check_own(x)?;
        let bits = self
            .apply_bits(x.bits())
            .ok_or_else(|| Error::Usage("element not in the embedding's domain".into()))?;
        Ok(self.target.wrap(bits))
    }

    /// `next ∘ self`. Every image of `self` must lie in `next`'s domain.
    pub fn then(&self, next: &Embedding) -> Result<Embedding> {
        if *self.target != *next.source {
            return Err(Error::Usage("embeddings do not compose: algebra mismatch".into()));
        }
        let mut images = Vec::with_capacity(self.images.len());
        for &img in &self.images {
            images.push(next.apply_bits(img).ok_or_else(|| {
                Error::Usage(format!(
                    "{} is outside the next embedding's domain",
                    self.target.format_bits(img)
                ))
            })?);
        }
        Ok(Embedding {
            source: self.source.clone(),
            domain: self.domain.clone(),
            target: next.target.clone(),
            images,
        })
    }

    pub fn check(&self) -> EmbeddingVerdict {
        check_embedding(self)
    }
}

/// True iff the map is an injective homomorphism on the domain subalgebra:
/// it preserves `+` (by construction), `·`, complement, `1'`, converse and
/// composition. Checked on domain atoms and atom pairs, which suffices by
/// additivity.
pub fn check_embedding(e: &Embedding) -> EmbeddingVerdict {
    let fail = |f| EmbeddingVerdict {
        ok: false,
        failure: Some(f),
    };
    let src = &e.source;
    let tgt = &e.target;
    let atoms = e.domain.atoms();
    let sname = |b: u64| src.format_bits(b);
    let tname = |b: u64| tgt.format_bits(b);

    let mut covered = 0u64;
    for (i, (&a, &img)) in atoms.iter().zip(&e.images).enumerate() {
        if img == 0 {
            return fail(EmbeddingFailure::ZeroImage { atom: sname(a) });
        }
        for (&b, &other) in atoms[..i].iter().zip(&e.images) {
            if img & other != 0 {
                return fail(EmbeddingFailure::Overlap {
                    first: sname(b),
                    second: sname(a),
                });
            }
        }
        covered |= img;
    }
    if covered != tgt.universe() {
        return fail(EmbeddingFailure::NotUnital {
            covered: tname(covered),
        });
    }

    match e.apply_bits(src.identity_bits()) {
        Some(id) if id == tgt.identity_bits() => {}
        Some(id) => return fail(EmbeddingFailure::Identity { got: tname(id) }),
        None => {
            return fail(EmbeddingFailure::Identity {
                got: "identity not in domain".into(),
            })
        }
    }

    for (&a, &img) in atoms.iter().zip(&e.images) {
        let ok = e
            .apply_bits(src.converse_bits(a))
            .is_some_and(|c| c == tgt.converse_bits(img));
        if !ok {
            return fail(EmbeddingFailure::Converse { atom: sname(a) });
        }
    }

    for (&a, &ia) in atoms.iter().zip(&e.images) {
        for (&b, &ib) in atoms.iter().zip(&e.images) {
            let expected = tgt.compose_bits(ia, ib);
            let got = e.apply_bits(src.compose_bits(a, b));
            if got != Some(expected) {
                return fail(EmbeddingFailure::Composition {
                    first: sname(a),
                    second: sname(b),
                    expected: tname(expected),
                    got: got.map_or_else(|| "outside domain".to_string(), tname),
                });
            }
        }
    }
    EmbeddingVerdict {
        ok: true,
        failure: None,
    }
}

/// Identity map of a whole algebra, as an embedding into itself.
pub fn identity_embedding(alg: Arc<FiniteRelationAlgebra>) -> Embedding {
    let domain = SubalgebraDescription::full(&alg);
    let images = bit_indices(alg.universe()).map(|i| 1u64 << i).collect();
    Embedding {
        source: alg.clone(),
        domain,
        target: alg,
        images,
    }
}
