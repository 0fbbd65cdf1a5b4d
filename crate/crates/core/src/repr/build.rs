use std::sync::Arc;

use super::{AtomLabeling, LabeledStructure};
use crate::algebra::AtomId;
use crate::error::{Error, Result};
use crate::gf::{field_make, Fe, Gf};
use crate::lpn::{build_lpn_arc, LpnParams};

/// Point index of `(a, b)` in `GF(q)^2`.
pub fn affine_index(q: usize, a: Fe, b: Fe) -> usize {
    a.0 as usize * q + b.0 as usize
}

/// Inverse of [`affine_index`].
pub fn affine_point(q: usize, i: usize) -> (Fe, Fe) {
    (Fe((i / q) as u32), Fe((i % q) as u32))
}

/// Slope index of the line through two distinct points: the field index of
/// `dy/dx`, or `q` for vertical lines.
fn slope(f: &Gf, q: usize, u: usize, v: usize) -> usize {
    let (x1, y1) = affine_point(q, u);
    let (x2, y2) = affine_point(q, v);
    let dx = f.sub(x2, x1);
    let dy = f.sub(y2, y1);
    if dx == f.zero() {
        q
    } else {
        f.mul(dy, f.inv(dx).expect("dx nonzero")).0 as usize
    }
}

fn checked_field(q: usize) -> Result<Gf> {
    if q < 3 {
        return Err(Error::Parameter(format!("q={q} must be at least 3")));
    }
    let q32 = u32::try_from(q).map_err(|_| Error::Parameter(format!("q={q} too large")))?;
    field_make(q32)
}

fn affine_labeling(params: LpnParams, f: &Gf, q: usize, copies: usize) -> Result<AtomLabeling> {
    let alg = build_lpn_arc(params)?;
    let d = q * q;
    let mut l = AtomLabeling::new(&alg, copies * d)?;
    for c in 0..copies {
        for u in 0..d {
            for v in u + 1..d {
                let a = AtomId(params.a(slope(f, q, u, v)));
                l.set(&alg, c * d + u, c * d + v, a)?;
            }
        }
    }
    Ok(l)
}

/// The affine plane over `GF(q)` as a representation of `L(q,0)`: points
/// are `GF(q)^2`, indexed `a*q + b`, and two distinct points are labeled
/// `a_i` when the line through them has slope `i` (`a_q` when vertical).
pub fn build_affine(q: usize) -> Result<LabeledStructure> {
    let f = checked_field(q)?;
    let params = LpnParams::new(q, 0)?;
    let l = affine_labeling(params, &f, q, 1)?;
    Ok(LabeledStructure::from_labeling(build_lpn_arc(params)?, l))
}

/// Two disjoint affine planes labeled as in [`build_affine`], every pair
/// across the copies labeled `t1`: a representation of `L(q,1)` on `2q^2`
/// points. Point `i < q^2` is in the first copy, `q^2 + i` is its mirror.
pub fn build_doubled(q: usize) -> Result<LabeledStructure> {
    let f = checked_field(q)?;
    let params = LpnParams::new(q, 1)?;
    let alg = build_lpn_arc(params)?;
    let mut l = affine_labeling(params, &f, q, 2)?;
    let d = q * q;
    for u in 0..d {
        for v in d..2 * d {
            l.set(&alg, u, v, AtomId(params.t(1)))?;
        }
    }
    Ok(LabeledStructure::from_labeling(alg, l))
}

/// `θ^m` on tuples of points. `m = 1` returns `s` itself.
pub fn build_power(s: Arc<LabeledStructure>, m: u32) -> Result<Arc<LabeledStructure>> {
    match m {
        0 => Err(Error::Parameter("power exponent must be at least 1".into())),
        1 => Ok(s),
        _ => Ok(Arc::new(LabeledStructure::power(s, m)?)),
    }
}
