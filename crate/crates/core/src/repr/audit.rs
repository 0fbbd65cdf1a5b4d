use serde::Serialize;

use super::{Budget, LabeledStructure};
use crate::error::Result;

/// Row degrees of one diversity atom: `|{y : (x,y) ∈ image(a)}|` over all points `x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AtomDegree {
    pub atom: String,
    pub min: usize,
    pub max: usize,
}

/// The degree condition a full representation of `L(p,n)` must meet:
/// every `a_i` has degree exactly `p-1` at every point, and `p-1 ≥ 2n-1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaDVerdict {
    pub p: usize,
    pub n: usize,
    pub a_degrees_equal_p_minus_1: bool,
    pub p_minus_1_at_least_2n_minus_1: bool,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeAudit {
    pub base_size: usize,
    pub degrees: Vec<AtomDegree>,
    /// Present when the algebra is some `L(p,n)`.
    pub lemma_d: Option<LemmaDVerdict>,
}

pub fn degree_audit(s: &LabeledStructure, budget: &Budget) -> Result<DegreeAudit> {
    let alg = s.algebra();
    let d = s.base_size();
    let labels = s.label_table(budget)?;
    let k = alg.atom_count();
    let mut counts = vec![vec![0usize; d]; k];
    for (i, &l) in labels.iter().enumerate() {
        if l.count_ones() == 1 {
            counts[l.trailing_zeros() as usize][i / d] += 1;
        }
    }
    let degrees: Vec<AtomDegree> = (0..k)
        .filter(|&a| alg.identity_bits() >> a & 1 == 0)
        .map(|a| AtomDegree {
            atom: alg.atom_names()[a].clone(),
            min: counts[a].iter().copied().min().unwrap_or(0),
            max: counts[a].iter().copied().max().unwrap_or(0),
        })
        .collect();
    let lemma_d = alg.lpn_params().map(|params| {
        let (p, n) = (params.p, params.n);
        let equal = (0..=p).all(|i| counts[params.a(i)].iter().all(|&c| c == p - 1));
        let bound = p as i64 > 2 * n as i64 - 1;
        LemmaDVerdict {
            p,
            n,
            a_degrees_equal_p_minus_1: equal,
            p_minus_1_at_least_2n_minus_1: bound,
            holds: equal && bound,
        }
    });
    Ok(DegreeAudit {
        base_size: d,
        degrees,
        lemma_d,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repr::{build_affine, build_doubled};

    #[test]
    fn affine_and_doubled() {
        let b = Budget::default();
        let a = degree_audit(&build_affine(3).unwrap(), &b).unwrap();
        assert!(a.degrees.iter().all(|g| g.min == 2 && g.max == 2));
        assert!(a.lemma_d.unwrap().holds);

        let dd = degree_audit(&build_doubled(3).unwrap(), &b).unwrap();
        let t1 = dd.degrees.iter().find(|g| g.atom == "t1").unwrap();
        assert_eq!((t1.min, t1.max), (9, 9));
        assert!(dd.degrees.iter().filter(|g| g.atom.starts_with('a')).all(|g| g.min == 2 && g.max == 2));
        assert!(dd.lemma_d.unwrap().holds);
    }
}
