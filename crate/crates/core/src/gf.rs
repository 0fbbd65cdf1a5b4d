//! Finite fields `GF(q)`, `q = p^k <= 2^16`.
//!
//! Elements are indexed `0..q` by their coefficient vector read as a base-`p`
//! number, constant term least significant. The modulus is the
//! lexicographically least monic irreducible polynomial of degree `k`:
//! candidates `x^k + c_{k-1} x^{k-1} + ... + c_0` are enumerated with
//! `(c_{k-1}, ..., c_0)` increasing lexicographically, which is the same as
//! increasing base-`p` index of the tail `c_{k-1} x^{k-1} + ... + c_0`.

use serde::Serialize;

use crate::error::{Error, Result};

pub const MAX_FIELD_ORDER: u32 = 1 << 16;

/// Field element, identified by its index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Fe(pub u32);

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FieldSpec {
    pub characteristic: u32,
    pub degree: u32,
    pub order: u32,
    /// Monic modulus, coefficients from the constant term up (length `degree + 1`).
    pub modulus: Vec<u32>,
}

/// Splits `q` as `p^k`, or `None` when `q` is not a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q && q % p != 0 {
        p += 1;
    }
    if q % p != 0 {
        p = q;
    }
    let (mut r, mut k) = (q, 0);
    while r % p == 0 {
        r /= p;
        k += 1;
    }
    (r == 1).then_some((p, k))
}

pub fn is_prime_power(q: u32) -> bool {
    prime_power(q).is_some()
}

/// Polynomial remainder of `a` by the monic `m`, coefficients mod `p`.
fn poly_rem(mut a: Vec<u32>, m: &[u32], p: u32) -> Vec<u32> {
    let dm = m.len() - 1;
    while a.len() > dm {
        let lead = a.pop().unwrap();
        if lead != 0 {
            let off = a.len() - dm;
            for (i, &c) in m[..dm].iter().enumerate() {
                a[off + i] = (a[off + i] + p - (lead * c) % p) % p;
            }
        }
    }
    a
}

fn digits(mut t: u32, p: u32, k: u32) -> Vec<u32> {
    (0..k)
        .map(|_| {
            let d = t % p;
            t /= p;
            d
        })
        .collect()
}

fn is_irreducible(m: &[u32], p: u32) -> bool {
    let k = (m.len() - 1) as u32;
    for d in 1..=k / 2 {
        for t in 0..p.pow(d) {
            let mut f = digits(t, p, d);
            f.push(1);
            if poly_rem(m.to_vec(), &f, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Arithmetic in one field.
#[derive(Clone, Debug)]
pub struct Gf {
    spec: FieldSpec,
}

/// `field_make` from the text: builds `GF(q)`.
pub fn field_make(q: u32) -> Result<Gf> {
    if q > MAX_FIELD_ORDER {
        return Err(Error::Parameter(format!("field order {q} exceeds {MAX_FIELD_ORDER}")));
    }
    let (p, k) = prime_power(q)
        .ok_or_else(|| Error::Parameter(format!("{q} is not a prime power")))?;
    let modulus = (0..p.pow(k))
        .map(|t| {
            let mut m = digits(t, p, k);
            m.push(1);
            m
        })
        .find(|m| is_irreducible(m, p))
        .ok_or_else(|| Error::Internal(format!("no irreducible polynomial of degree {k} mod {p}")))?;
    Ok(Gf {
        spec: FieldSpec {
            characteristic: p,
            degree: k,
            order: q,
            modulus,
        },
    })
}

impl Gf {
    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn order(&self) -> u32 {
        self.spec.order
    }

    pub fn characteristic(&self) -> u32 {
        self.spec.characteristic
    }

    pub fn zero(&self) -> Fe {
        Fe(0)
    }

    pub fn one(&self) -> Fe {
        Fe(1)
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.spec.order).map(Fe)
    }

    pub fn element(&self, index: u32) -> Result<Fe> {
        if index >= self.spec.order {
            return Err(Error::Domain(format!("{index} is not an element of GF({})", self.spec.order)));
        }
        Ok(Fe(index))
    }

    pub fn coeffs(&self, x: Fe) -> Vec<u32> {
        digits(x.0, self.spec.characteristic, self.spec.degree)
    }

    pub fn from_coeffs(&self, c: &[u32]) -> Fe {
        let p = self.spec.characteristic;
        Fe(c.iter().rev().fold(0, |acc, &d| acc * p + d % p))
    }

    pub fn add(&self, x: Fe, y: Fe) -> Fe {
        let p = self.spec.characteristic;
        if self.spec.degree == 1 {
            return Fe((x.0 + y.0) % p);
        }
        let c: Vec<u32> = self
            .coeffs(x)
            .iter()
            .zip(self.coeffs(y))
            .map(|(a, b)| (a + b) % p)
            .collect();
        self.from_coeffs(&c)
    }

    pub fn neg(&self, x: Fe) -> Fe {
        let p = self.spec.characteristic;
        let c: Vec<u32> = self.coeffs(x).iter().map(|&a| (p - a) % p).collect();
        self.from_coeffs(&c)
    }

    pub fn sub(&self, x: Fe, y: Fe) -> Fe {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: Fe, y: Fe) -> Fe {
        let p = self.spec.characteristic;
        if self.spec.degree == 1 {
            return Fe(((x.0 as u64 * y.0 as u64) % p as u64) as u32);
        }
        let a = self.coeffs(x);
        let b = self.coeffs(y);
        let mut prod = vec![0u32; a.len() + b.len() - 1];
        for (i, &ai) in a.iter().enumerate() {
            for (j, &bj) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + ai * bj) % p;
            }
        }
        self.from_coeffs(&poly_rem(prod, &self.spec.modulus, p))
    }

    pub fn pow(&self, x: Fe, mut e: u64) -> Fe {
        let mut base = x;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, x: Fe) -> Result<Fe> {
        if x.0 == 0 {
            return Err(Error::Domain("inverse of zero".into()));
        }
        Ok(self.pow(x, self.spec.order as u64 - 2))
    }
}
