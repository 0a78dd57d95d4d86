//! Bit-packed linear algebra over `F_2`.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_ones(len: usize, ones: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in ones {
            v.flip(i);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        let bit = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= bit;
        } else {
            self.words[i / 64] &= !bit;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &Self) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            })
        })
    }

    /// Inner product over `F_2`.
    pub fn dot(&self, other: &Self) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum::<u32>()
            % 2
            == 1
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// A dense matrix stored by rows.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct F2Matrix {
    rows: Vec<BitVec>,
    cols: usize,
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows: vec![BitVec::zeros(cols); rows],
            cols,
        }
    }

    pub fn from_rows(rows: Vec<BitVec>, cols: usize) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols));
        Self { rows, cols }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &BitVec {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.rows[i].set(j, value);
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitVec::is_zero)
    }

    pub fn rank(&self) -> usize {
        Echelon::from_rows(self.rows.iter().cloned(), self.cols).rank()
    }

    /// `self · other`, rows times rows: `(AB)_i = Σ_j A_ij B_j`.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.nrows());
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut acc = BitVec::zeros(other.cols);
                for j in r.ones() {
                    acc.xor_assign(&other.rows[j]);
                }
                acc
            })
            .collect();
        Self::from_rows(rows, other.cols)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.nrows());
        for (i, r) in self.rows.iter().enumerate() {
            for j in r.ones() {
                t.rows[j].set(i, true);
            }
        }
        t
    }
}

/// A fully reduced row echelon basis of a subspace.
///
/// Every pivot column appears in exactly one basis row, so reduction leaves
/// a unique normal form for each coset of the subspace.
#[derive(Clone, Debug)]
pub struct Echelon {
    rows: Vec<BitVec>,
    pivots: Vec<usize>,
    cols: usize,
}

impl Echelon {
    pub fn new(cols: usize) -> Self {
        Self {
            rows: Vec::new(),
            pivots: Vec::new(),
            cols,
        }
    }

    pub fn from_rows(rows: impl IntoIterator<Item = BitVec>, cols: usize) -> Self {
        let mut e = Self::new(cols);
        for r in rows {
            e.insert(r);
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn basis(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn reduce(&self, v: &BitVec) -> BitVec {
        let mut v = v.clone();
        self.reduce_in_place(&mut v);
        v
    }

    fn reduce_in_place(&self, v: &mut BitVec) {
        for (r, &p) in self.rows.iter().zip(&self.pivots) {
            if v.get(p) {
                v.xor_assign(r);
            }
        }
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds a vector; returns whether the span grew.
    pub fn insert(&mut self, v: BitVec) -> bool {
        self.insert_tracked(v).is_some()
    }

    /// Adds a vector and returns the index of the new row, if any.
    fn insert_tracked(&mut self, mut v: BitVec) -> Option<(usize, Vec<usize>)> {
        assert_eq!(v.len(), self.cols);
        self.reduce_in_place(&mut v);
        let p = v.first_one()?;
        let mut touched = Vec::new();
        for (i, r) in self.rows.iter_mut().enumerate() {
            if r.get(p) {
                r.xor_assign(&v);
                touched.push(i);
            }
        }
        self.rows.push(v);
        self.pivots.push(p);
        Some((self.rows.len() - 1, touched))
    }
}

/// Row reduction of a list of source vectors, remembering which combination of
/// sources produced each echelon row.
#[derive(Clone, Debug)]
pub struct Elimination {
    echelon: Echelon,
    combos: Vec<BitVec>,
    kernel: Vec<BitVec>,
    sources: usize,
}

impl Elimination {
    pub fn new(sources: &[BitVec], cols: usize) -> Self {
        let mut echelon = Echelon::new(cols);
        let mut combos: Vec<BitVec> = Vec::new();
        let mut kernel = Vec::new();
        let m = sources.len();
        for (j, v) in sources.iter().enumerate() {
            let mut v = v.clone();
            let mut combo = BitVec::unit(m, j);
            for ((r, &p), c) in echelon.rows.iter().zip(&echelon.pivots).zip(&combos) {
                if v.get(p) {
                    v.xor_assign(r);
                    combo.xor_assign(c);
                }
            }
            if v.is_zero() {
                kernel.push(combo);
                continue;
            }
            let (_, touched) = echelon.insert_tracked(v).expect("nonzero after reduction");
            for i in touched {
                let c = combos[i].clone();
                let mut merged = c;
                merged.xor_assign(&combo);
                combos[i] = merged;
            }
            combos.push(combo);
        }
        Self {
            echelon,
            combos,
            kernel,
            sources: m,
        }
    }

    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    pub fn echelon(&self) -> &Echelon {
        &self.echelon
    }

    /// Combinations of sources that sum to zero; a basis of the left kernel.
    pub fn kernel(&self) -> &[BitVec] {
        &self.kernel
    }

    /// A combination of sources summing to `target`, if one exists.
    pub fn solve(&self, target: &BitVec) -> Option<BitVec> {
        let mut v = target.clone();
        let mut combo = BitVec::zeros(self.sources);
        for ((r, &p), c) in self
            .echelon
            .rows
            .iter()
            .zip(&self.echelon.pivots)
            .zip(&self.combos)
        {
            if v.get(p) {
                v.xor_assign(r);
                combo.xor_assign(c);
            }
        }
        v.is_zero().then_some(combo)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn vecs(len: usize, max_rows: usize) -> impl Strategy<Value = Vec<BitVec>> {
        prop::collection::vec(prop::collection::vec(any::<bool>(), len), 0..max_rows).prop_map(
            move |rows| {
                rows.into_iter()
                    .map(|bits| BitVec::from_ones(len, bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)))
                    .collect()
            },
        )
    }

    #[test]
    fn small_rank() {
        let rows = vec![
            BitVec::from_ones(3, [0, 1]),
            BitVec::from_ones(3, [1, 2]),
            BitVec::from_ones(3, [0, 2]),
        ];
        assert_eq!(F2Matrix::from_rows(rows, 3).rank(), 2);
    }

    proptest! {
        #[test]
        fn rank_nullity(rows in vecs(70, 12)) {
            let elim = Elimination::new(&rows, 70);
            prop_assert_eq!(elim.rank() + elim.kernel().len(), rows.len());
            for k in elim.kernel() {
                let mut acc = BitVec::zeros(70);
                for j in k.ones() { acc.xor_assign(&rows[j]); }
                prop_assert!(acc.is_zero());
            }
        }

        #[test]
        fn solve_reproduces_target(rows in vecs(40, 10), pick in prop::collection::vec(any::<bool>(), 10)) {
            let mut target = BitVec::zeros(40);
            for (j, r) in rows.iter().enumerate() {
                if pick[j] { target.xor_assign(r); }
            }
            let elim = Elimination::new(&rows, 40);
            let combo = elim.solve(&target).expect("target lies in the span");
            let mut acc = BitVec::zeros(40);
            for j in combo.ones() { acc.xor_assign(&rows[j]); }
            prop_assert_eq!(acc, target);
        }

        #[test]
        fn normal_form_is_coset_invariant(rows in vecs(30, 8), bits in prop::collection::vec(any::<bool>(), 30)) {
            let v = BitVec::from_ones(30, bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i));
            let e = Echelon::from_rows(rows.iter().cloned(), 30);
            let mut shifted = v.clone();
            for r in &rows { shifted.xor_assign(r); }
            prop_assert_eq!(e.reduce(&v), e.reduce(&shifted));
        }

        #[test]
        fn transpose_preserves_rank(rows in vecs(20, 15)) {
            let m = F2Matrix::from_rows(rows, 20);
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }
    }
}
