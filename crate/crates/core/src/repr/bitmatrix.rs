use std::fmt;

/// Square boolean matrix with packed 64-bit rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    n: usize,
    words: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(n: usize) -> Self {
        let words = n.div_ceil(64);
        BitMatrix {
            n,
            words,
            data: vec![0; n * words],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i);
        }
        m
    }

    pub fn full(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.row_mut(i).fill(!0);
        }
        m.mask_tail();
        m
    }

    fn mask_tail(&mut self) {
        let r = self.n % 64;
        if r == 0 {
            return;
        }
        let mask = (1u64 << r) - 1;
        for i in 0..self.n {
            self.data[i * self.words + self.words - 1] &= mask;
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize) {
        self.data[i * self.words + j / 64] |= 1 << (j % 64);
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.words..(i + 1) * self.words]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.data[i * self.words..(i + 1) * self.words]
    }

    pub fn row_count(&self, i: usize) -> usize {
        self.row(i).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn count_ones(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    /// Set entries of row `i`, ascending.
    pub fn row_iter(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(i).iter().enumerate().flat_map(|(w, &bits)| {
            crate::algebra::bit_indices(bits).map(move |b| w * 64 + b)
        })
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n);
        for i in 0..self.n {
            for j in self.row_iter(i) {
                t.set(j, i);
            }
        }
        t
    }

    /// Relational composition: `(i,k)` is set iff some `j` has `(i,j)` in
    /// `self` and `(j,k)` in `other`.
    pub fn product(&self, other: &BitMatrix) -> Self {
        assert_eq!(self.n, other.n, "size mismatch");
        let mut out = Self::zeros(self.n);
        for i in 0..self.n {
            let start = i * self.words;
            for j in self.row_iter(i) {
                let src = other.row(j);
                for (d, s) in out.data[start..start + self.words].iter_mut().zip(src) {
                    *d |= s;
                }
            }
        }
        out
    }

    pub fn union(&self, other: &BitMatrix) -> Self {
        self.zip(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &BitMatrix) -> Self {
        self.zip(other, |a, b| a & b)
    }

    pub fn complement(&self) -> Self {
        let mut m = BitMatrix {
            n: self.n,
            words: self.words,
            data: self.data.iter().map(|w| !w).collect(),
        };
        m.mask_tail();
        m
    }

    fn zip(&self, other: &BitMatrix, f: impl Fn(u64, u64) -> u64) -> Self {
        assert_eq!(self.n, other.n, "size mismatch");
        BitMatrix {
            n: self.n,
            words: self.words,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    /// Some entry set here but not in `other`, smallest in row-major order.
    pub fn first_difference(&self, other: &BitMatrix) -> Option<(usize, usize)> {
        for i in 0..self.n {
            for (w, (a, b)) in self.row(i).iter().zip(other.row(i)).enumerate() {
                let x = a ^ b;
                if x != 0 {
                    return Some((i, w * 64 + x.trailing_zeros() as usize));
                }
            }
        }
        None
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix({})", self.n)?;
        for i in 0..self.n.min(64) {
            let s: String = (0..self.n.min(64)).map(|j| if self.get(i, j) { '1' } else { '.' }).collect();
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}
