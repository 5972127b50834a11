//! Sublattices of Z^r in Hermite normal form, and Smith invariants.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// A sublattice of Z^dim, stored as its row Hermite normal form: pivots
/// strictly increase, are positive, and entries above a pivot lie in [0, pivot).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    dim: usize,
    basis: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

impl Lattice {
    pub fn from_generators(dim: usize, rows: &[Vec<BigInt>]) -> Lattice {
        let (basis, pivots) = hnf(dim, rows.to_vec());
        Lattice { dim, basis, pivots }
    }

    pub fn from_i64_rows(dim: usize, rows: &[Vec<i64>]) -> Lattice {
        let rows: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        Self::from_generators(dim, &rows)
    }

    /// Z^dim scaled by k.
    pub fn scaled_standard(dim: usize, k: i64) -> Lattice {
        let rows: Vec<Vec<i64>> = (0..dim).map(|i| (0..dim).map(|j| if i == j { k } else { 0 }).collect()).collect();
        Self::from_i64_rows(dim, &rows)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        assert_eq!(v.len(), self.dim, "vector dimension");
        let mut v = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if v[..p].iter().any(|x| !x.is_zero()) {
                return false;
            }
            let (q, r) = v[p].div_rem(&row[p]);
            if !r.is_zero() {
                return false;
            }
            if !q.is_zero() {
                for (x, y) in v.iter_mut().zip(row) {
                    *x -= &q * y;
                }
            }
        }
        v.iter().all(Zero::is_zero)
    }

    pub fn contains_i64(&self, v: &[i64]) -> bool {
        self.contains(&v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>())
    }

    pub fn is_sublattice_of(&self, other: &Lattice) -> bool {
        self.basis.iter().all(|row| other.contains(row))
    }

    /// |Z^dim : L| for full-rank L.
    pub fn index(&self) -> Option<BigInt> {
        (self.rank() == self.dim).then(|| self.basis.iter().zip(&self.pivots).map(|(r, &p)| r[p].clone()).product())
    }

    /// The lattice spanned by both.
    pub fn join(&self, other: &Lattice) -> Lattice {
        assert_eq!(self.dim, other.dim, "lattice dimension");
        let rows: Vec<Vec<BigInt>> = self.basis.iter().chain(&other.basis).cloned().collect();
        Lattice::from_generators(self.dim, &rows)
    }
}

fn hnf(dim: usize, mut rows: Vec<Vec<BigInt>>) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    let mut pivots = Vec::new();
    let mut top = 0;
    for c in 0..dim {
        while let Some(p) = (top..rows.len()).filter(|&r| !rows[r][c].is_zero()).min_by_key(|&r| rows[r][c].abs()) {
            rows.swap(top, p);
            let mut done = true;
            for r in top + 1..rows.len() {
                if rows[r][c].is_zero() {
                    continue;
                }
                let q = rows[r][c].div_floor(&rows[top][c]);
                let pivot_row = rows[top].clone();
                for (x, y) in rows[r].iter_mut().zip(&pivot_row) {
                    *x -= &q * y;
                }
                if !rows[r][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if top < rows.len() && !rows[top][c].is_zero() {
            if rows[top][c].is_negative() {
                for x in rows[top].iter_mut() {
                    *x = -&*x;
                }
            }
            let pivot_row = rows[top].clone();
            for row in rows.iter_mut().take(top) {
                let q = row[c].div_floor(&pivot_row[c]);
                if !q.is_zero() {
                    for (x, y) in row.iter_mut().zip(&pivot_row) {
                        *x -= &q * y;
                    }
                }
            }
            pivots.push(c);
            top += 1;
        }
        rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    }
    rows.truncate(top);
    (rows, pivots)
}

/// Nonzero invariant factors d_1 | d_2 | … of the row span.
pub fn smith_invariants(rows: &[Vec<BigInt>]) -> Vec<BigInt> {
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let nr = a.len();
    let nc = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    for t in 0..nr.min(nc) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..nr {
                for j in t..nc {
                    if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                break;
            };
            a.swap(t, bi);
            for row in a.iter_mut() {
                row.swap(t, bj);
            }
            let mut clean = true;
            for i in t + 1..nr {
                let q = a[i][t].div_floor(&a[t][t]);
                if !q.is_zero() {
                    let pr = a[t].clone();
                    for (x, y) in a[i].iter_mut().zip(&pr) {
                        *x -= &q * y;
                    }
                }
                clean &= a[i][t].is_zero();
            }
            for j in t + 1..nc {
                let q = a[t][j].div_floor(&a[t][t]);
                if !q.is_zero() {
                    for row in a.iter_mut() {
                        let y = row[t].clone();
                        row[j] -= &q * y;
                    }
                }
                clean &= a[t][j].is_zero();
            }
            if clean {
                break;
            }
        }
        if a[t][t].is_zero() {
            break;
        }
        diag.push(a[t][t].abs());
    }
    // enforce the divisibility chain: diag(a, b) ~ diag(gcd, lcm)
    for i in 0..diag.len() {
        for j in i + 1..diag.len() {
            let g = diag[i].gcd(&diag[j]);
            let l = &diag[i] / &g * &diag[j];
            diag[i] = g;
            diag[j] = l;
        }
    }
    diag
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    /// Bareiss fraction-free determinant.
    fn det(mut a: Vec<Vec<BigInt>>) -> BigInt {
        let n = a.len();
        let mut sign = BigInt::from(1);
        let mut prev = BigInt::from(1);
        for k in 0..n {
            if a[k][k].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                    return BigInt::zero();
                };
                a.swap(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    #[test]
    fn small_examples() {
        let l = Lattice::from_i64_rows(2, &[vec![2, 0], vec![0, 3], vec![4, 6]]);
        assert_eq!(l.index(), Some(BigInt::from(6)));
        assert!(l.contains_i64(&[2, 3]));
        assert!(!l.contains_i64(&[1, 0]));
        assert_eq!(smith_invariants(&big(&[vec![2, 0], vec![0, 3]])), vec![BigInt::from(1), BigInt::from(6)]);
        assert_eq!(smith_invariants(&big(&[vec![2, 4], vec![4, 8]])), vec![BigInt::from(2)]);
        let half = Lattice::from_i64_rows(2, &[vec![1, 0], vec![0, 3]]);
        assert!(l.is_sublattice_of(&half));
        assert!(!half.is_sublattice_of(&l));
        assert_eq!(l.join(&half), half);
    }

    proptest! {
        #[test]
        fn hnf_and_smith_agree_with_determinant(raw in prop::collection::vec(-9i64..=9, 16), extra in prop::collection::vec(-9i64..=9, 4)) {
            let rows: Vec<Vec<i64>> = raw.chunks(4).map(<[i64]>::to_vec).collect();
            let d = det(big(&rows)).abs();
            let l = Lattice::from_i64_rows(4, &rows);
            for r in &rows {
                prop_assert!(l.contains_i64(r));
            }
            if d.is_zero() {
                prop_assert!(l.rank() < 4);
            } else {
                prop_assert_eq!(l.index().unwrap(), d.clone());
                let inv = smith_invariants(&big(&rows));
                prop_assert_eq!(inv.iter().product::<BigInt>(), d.clone());
                for w in inv.windows(2) {
                    prop_assert!((&w[1] % &w[0]).is_zero());
                }
                // d·v lies in L for every integer v
                let v: Vec<BigInt> = extra.iter().map(|&x| BigInt::from(x) * &d).collect();
                prop_assert!(l.contains(&v));
            }
        }
    }
}
