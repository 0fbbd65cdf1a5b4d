use serde::Serialize;

use crate::error::{Error, Result};

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z ^= z >> 30;
    z = z.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z ^= z >> 27;
    z = z.wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Hash-defined split of `D x D'` into `n` classes:
/// `class(x, y') = 1 + mix64(seed ^ ((x*d + y + 1) * 0x9E3779B97F4A7C15)) mod n`,
/// all arithmetic mod 2^64.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionRecipe {
    pub seed: u64,
    pub n: usize,
    pub d: usize,
}

impl PartitionRecipe {
    pub fn new(seed: u64, n: usize, d: usize) -> Result<Self> {
        if n == 0 || n > 64 {
            return Err(Error::Parameter(format!("class count n={n} outside 1..=64")));
        }
        Ok(PartitionRecipe { seed, n, d })
    }

    /// Class of `(x, y')`, in `1..=n`.
    pub fn class(&self, x: usize, y: usize) -> usize {
        let edge = (x as u64).wrapping_mul(self.d as u64).wrapping_add(y as u64);
        let h = mix64(self.seed ^ edge.wrapping_add(1).wrapping_mul(GOLDEN));
        1 + (h % self.n as u64) as usize
    }
}

/// Classes given edge by edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplicitPartition {
    d: usize,
    n: usize,
    classes: Vec<u8>,
}

impl ExplicitPartition {
    /// Every `(x, y)` in `0..d x 0..d` must occur exactly once with a class in `1..=n`.
    pub fn from_edges(d: usize, n: usize, edges: &[(usize, usize, usize)]) -> Result<Self> {
        if n == 0 || n > 64 {
            return Err(Error::Parameter(format!("class count n={n} outside 1..=64")));
        }
        let mut classes = vec![0u8; d * d];
        for &(x, y, i) in edges {
            if x >= d || y >= d || i == 0 || i > n {
                return Err(Error::Parameter(format!("tedge {x} {y} {i} out of range")));
            }
            let slot = &mut classes[x * d + y];
            if *slot != 0 {
                return Err(Error::Parameter(format!("duplicate tedge {x} {y}")));
            }
            *slot = i as u8;
        }
        if let Some(pos) = classes.iter().position(|&c| c == 0) {
            return Err(Error::Parameter(format!(
                "tedge missing for {} {}",
                pos / d,
                pos % d
            )));
        }
        Ok(ExplicitPartition { d, n, classes })
    }

    pub fn class(&self, x: usize, y: usize) -> usize {
        self.classes[x * self.d + y] as usize
    }

    /// `(x, y, class)` in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.classes
            .iter()
            .enumerate()
            .map(|(i, &c)| (i / self.d, i % self.d, c as usize))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Partition {
    Seeded(PartitionRecipe),
    Explicit(ExplicitPartition),
}

impl Partition {
    pub fn n(&self) -> usize {
        match self {
            Partition::Seeded(r) => r.n,
            Partition::Explicit(e) => e.n,
        }
    }

    pub fn d(&self) -> usize {
        match self {
            Partition::Seeded(r) => r.d,
            Partition::Explicit(e) => e.d,
        }
    }

    pub fn class(&self, x: usize, y: usize) -> usize {
        match self {
            Partition::Seeded(r) => r.class(x, y),
            Partition::Explicit(e) => e.class(x, y),
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            Partition::Seeded(r) => Some(r.seed),
            Partition::Explicit(_) => None,
        }
    }

    /// Same classes, stored edge by edge.
    pub fn to_explicit(&self) -> ExplicitPartition {
        match self {
            Partition::Explicit(e) => e.clone(),
            Partition::Seeded(r) => {
                let d = r.d;
                ExplicitPartition {
                    d,
                    n: r.n,
                    classes: (0..d * d).map(|i| r.class(i / d, i % d) as u8).collect(),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Second implementation of the finalizer, written from the shift/multiply
    /// definition with explicit 128-bit products truncated to 64 bits.
    fn mix64_u128(z: u64) -> u64 {
        let m = |a: u64, b: u64| ((a as u128 * b as u128) & u64::MAX as u128) as u64;
        let z = z ^ (z >> 30);
        let z = m(z, 0xBF58476D1CE4E5B9);
        let z = z ^ (z >> 27);
        let z = m(z, 0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    fn class_u128(seed: u64, n: u64, d: u64, x: u64, y: u64) -> u64 {
        let edge = ((x as u128 * d as u128 + y as u128 + 1) * 0x9E3779B97F4A7C15u128) as u64;
        1 + mix64_u128(seed ^ edge) % n
    }

    #[test]
    fn mix64_known_values() {
        // SplitMix64 from state 0 returns mix64(0x9E3779B97F4A7C15) first.
        assert_eq!(mix64(GOLDEN), 0xE220_A839_7B1D_CDAF);
        assert_eq!(mix64(0), 0);
        for z in [1u64, 42, u64::MAX, 0xDEAD_BEEF, GOLDEN.wrapping_mul(7)] {
            assert_eq!(mix64(z), mix64_u128(z));
        }
    }

    #[test]
    fn golden_vectors_seed1_d9_n2() {
        // Edges e = x*9 + y for e = 0..8, i.e. x = 0, y = 0..8.
        const GOLDEN_CLASSES: [usize; 9] = [1, 2, 2, 2, 1, 1, 2, 2, 1];
        let r = PartitionRecipe::new(1, 2, 9).unwrap();
        let ours: Vec<usize> = (0..9).map(|y| r.class(0, y)).collect();
        let other: Vec<usize> = (0..9).map(|y| class_u128(1, 2, 9, 0, y) as usize).collect();
        assert_eq!(ours, other);
        assert_eq!(ours, GOLDEN_CLASSES);
    }

    #[test]
    fn recipe_agrees_with_reference_on_grid() {
        for seed in [0u64, 5, u64::MAX] {
            for n in 1..5 {
                let d = 13;
                let r = PartitionRecipe::new(seed, n, d).unwrap();
                for x in 0..d {
                    for y in 0..d {
                        assert_eq!(r.class(x, y) as u64, class_u128(seed, n as u64, d as u64, x as u64, y as u64));
                    }
                }
            }
        }
    }

    #[test]
    fn explicit_partition_validation() {
        let r = Partition::Seeded(PartitionRecipe::new(3, 3, 4).unwrap());
        let e = r.to_explicit();
        let edges: Vec<_> = e.edges().collect();
        let back = ExplicitPartition::from_edges(4, 3, &edges).unwrap();
        assert_eq!(back, e);
        for x in 0..4 {
            for y in 0..4 {
                assert_eq!(back.class(x, y), r.class(x, y));
            }
        }
        assert!(ExplicitPartition::from_edges(4, 3, &edges[1..]).is_err());
        let mut dup = edges.clone();
        dup.push(edges[0]);
        assert!(ExplicitPartition::from_edges(4, 3, &dup).is_err());
        assert!(PartitionRecipe::new(0, 0, 4).is_err());
    }
}
