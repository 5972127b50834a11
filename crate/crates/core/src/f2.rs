//! Dense vectors and matrices over F2, packed into 64-bit words.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Indices listed an odd number of times end up set.
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

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &BitVec) -> BitVec {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * 64 + b)
            })
        })
    }

    /// Copy of bits `start..end`.
    pub fn slice(&self, start: usize, end: usize) -> BitVec {
        BitVec::from_ones(end - start, self.iter_ones().filter(|&i| i >= start && i < end).map(|i| i - start))
    }

    /// Hex of the integer whose bit i is entry i, most significant digit first,
    /// zero-padded to ceil(len / 4) digits.
    pub fn to_hex(&self) -> String {
        let digits = self.len.div_ceil(4).max(1);
        (0..digits)
            .rev()
            .map(|d| {
                let mut nib = 0u32;
                for b in 0..4 {
                    let i = d * 4 + b;
                    if i < self.len && self.get(i) {
                        nib |= 1 << b;
                    }
                }
                char::from_digit(nib, 16).unwrap()
            })
            .collect()
    }

    pub fn from_hex(len: usize, hex: &str) -> Option<BitVec> {
        let mut v = BitVec::zeros(len);
        for (d, c) in hex.chars().rev().enumerate() {
            let nib = c.to_digit(16)?;
            for b in 0..4 {
                if nib >> b & 1 == 1 {
                    let i = d * 4 + b;
                    if i >= len {
                        return None;
                    }
                    v.set(i, true);
                }
            }
        }
        Some(v)
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len).map(|i| if self.get(i) { '1' } else { '0' }).collect();
        write!(f, "BitVec({s})")
    }
}

/// Row-major F2 matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVec>,
}

impl BitMatrix {
    pub fn new(cols: usize) -> Self {
        BitMatrix { cols, rows: Vec::new() }
    }

    pub fn from_rows(cols: usize, rows: Vec<BitVec>) -> Self {
        for r in &rows {
            assert_eq!(r.len(), cols, "row width mismatch");
        }
        BitMatrix { cols, rows }
    }

    /// Matrix whose column c is `columns[c]`.
    pub fn from_columns(nrows: usize, columns: &[BitVec]) -> Self {
        let mut rows = vec![BitVec::zeros(columns.len()); nrows];
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), nrows, "column height mismatch");
            for r in col.iter_ones() {
                rows[r].set(c, true);
            }
        }
        BitMatrix { cols: columns.len(), rows }
    }

    pub fn push_row(&mut self, row: BitVec) {
        assert_eq!(row.len(), self.cols, "row width mismatch");
        self.rows.push(row);
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> BitMatrix {
        let rows = rows
            .iter()
            .map(|&r| BitVec::from_bools(&cols.iter().map(|&c| self.get(r, c)).collect::<Vec<_>>()))
            .collect();
        BitMatrix::from_rows(cols.len(), rows)
    }

    pub fn mul_vec(&self, x: &BitVec) -> BitVec {
        assert_eq!(x.len(), self.cols, "vector length mismatch");
        let mut out = BitVec::zeros(self.rows.len());
        for (i, r) in self.rows.iter().enumerate() {
            let parity = r.words().iter().zip(x.words()).map(|(a, b)| (a & b).count_ones()).sum::<u32>();
            if parity % 2 == 1 {
                out.set(i, true);
            }
        }
        out
    }

    /// Reduced row echelon form and the pivot column of each nonzero row.
    pub fn rref(&self) -> (BitMatrix, Vec<usize>) {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut top = 0;
        for c in 0..self.cols {
            let Some(p) = (top..rows.len()).find(|&r| rows[r].get(c)) else {
                continue;
            };
            rows.swap(top, p);
            let pivot = rows[top].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != top && row.get(c) {
                    row.xor_assign(&pivot);
                }
            }
            pivots.push(c);
            top += 1;
            if top == rows.len() {
                break;
            }
        }
        (BitMatrix { cols: self.cols, rows }, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    /// Basis of {x : Mx = 0}.
    pub fn kernel_basis(&self) -> Vec<BitVec> {
        let (red, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = BitVec::unit(self.cols, f);
                for (r, &p) in pivots.iter().enumerate() {
                    if red.rows[r].get(f) {
                        x.set(p, true);
                    }
                }
                x
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn hex_layout() {
        let v = BitVec::from_ones(8, [0, 3, 4]);
        assert_eq!(v.to_hex(), "19");
        assert_eq!(BitVec::from_hex(8, "19"), Some(v));
        assert_eq!(BitVec::zeros(2).to_hex(), "0");
        assert_eq!(BitVec::from_ones(5, [4]).to_hex(), "10");
    }

    #[test]
    fn rank_of_identity_and_dependent_rows() {
        let m = BitMatrix::from_rows(3, (0..3).map(|i| BitVec::unit(3, i)).collect());
        assert_eq!(m.rank(), 3);
        let rows = vec![
            BitVec::from_ones(3, [0, 1]),
            BitVec::from_ones(3, [1, 2]),
            BitVec::from_ones(3, [0, 2]),
        ];
        let m = BitMatrix::from_rows(3, rows);
        assert_eq!(m.rank(), 2);
        assert_eq!(m.nullity(), 1);
        assert_eq!(m.kernel_basis(), vec![BitVec::from_ones(3, [0, 1, 2])]);
    }

    fn naive_rank(mut rows: Vec<Vec<bool>>, cols: usize) -> usize {
        let mut rank = 0;
        for c in 0..cols {
            if let Some(p) = (rank..rows.len()).find(|&r| rows[r][c]) {
                rows.swap(rank, p);
                let pivot = rows[rank].clone();
                for (r, row) in rows.iter_mut().enumerate() {
                    if r != rank && row[c] {
                        row.iter_mut().zip(&pivot).for_each(|(x, y)| *x ^= y);
                    }
                }
                rank += 1;
            }
        }
        rank
    }

    proptest! {
        #[test]
        fn rank_matches_naive(cols in 1usize..90, raw in prop::collection::vec(any::<u64>(), 1..40)) {
            let rows: Vec<Vec<bool>> = raw.iter().enumerate()
                .map(|(i, &w)| (0..cols).map(|c| (w.rotate_left((i * 7 + c) as u32) >> (c % 64)) & 1 == 1).collect())
                .collect();
            let m = BitMatrix::from_rows(cols, rows.iter().map(|r| BitVec::from_bools(r)).collect());
            let rank = m.rank();
            prop_assert_eq!(rank, naive_rank(rows, cols));
            for k in m.kernel_basis() {
                prop_assert!(m.mul_vec(&k).is_zero());
            }
            prop_assert_eq!(m.kernel_basis().len(), cols - rank);
        }

        #[test]
        fn hex_round_trip(len in 1usize..200, seed in any::<u64>()) {
            let v = BitVec::from_ones(len, (0..len).filter(|i| (seed.rotate_left(*i as u32) ^ (*i as u64 * 0x9e37)) & 1 == 1));
            prop_assert_eq!(BitVec::from_hex(len, &v.to_hex()), Some(v));
        }
    }
}
