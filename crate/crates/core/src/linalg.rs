//! Exact linear algebra over `Rat`: incremental sparse echelon forms for rank
//! and span membership, and small dense solves.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rat::Rat;

pub type SparseVec = Vec<(usize, Rat)>;

/// Rows in echelon form with unit pivots, grown one vector at a time.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    ncols: usize,
    pivot_row: Vec<Option<usize>>,
    rows: Vec<SparseVec>,
}

impl Echelon {
    pub fn new(ncols: usize) -> Echelon {
        Echelon { ncols, pivot_row: vec![None; ncols], rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    /// Reduces `v` against the current rows, returning the dense remainder.
    fn reduce(&self, v: &[(usize, Rat)]) -> Vec<Rat> {
        let mut dense = vec![Rat::zero(); self.ncols];
        for (c, a) in v {
            assert!(*c < self.ncols, "column {c} out of range");
            dense[*c] += a;
        }
        for c in 0..self.ncols {
            if dense[c].is_zero() {
                continue;
            }
            if let Some(r) = self.pivot_row[c] {
                let f = dense[c].clone();
                for (j, a) in &self.rows[r] {
                    dense[*j] -= &(&f * a);
                }
            }
        }
        dense
    }

    /// Adds `v`; returns whether it was independent of the rows so far.
    pub fn insert(&mut self, v: &[(usize, Rat)]) -> bool {
        let dense = self.reduce(v);
        let Some(lead) = dense.iter().position(|a| !a.is_zero()) else {
            return false;
        };
        let inv = dense[lead].recip();
        let row: SparseVec = dense
            .into_iter()
            .enumerate()
            .skip(lead)
            .filter(|(_, a)| !a.is_zero())
            .map(|(j, a)| (j, a * &inv))
            .collect();
        self.pivot_row[lead] = Some(self.rows.len());
        self.rows.push(row);
        true
    }

    pub fn contains(&self, v: &[(usize, Rat)]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }
}

/// Rank of a list of sparse vectors.
pub fn rank(ncols: usize, vectors: &[SparseVec]) -> usize {
    let mut e = Echelon::new(ncols);
    for v in vectors {
        e.insert(v);
        if e.rank() == ncols {
            break;
        }
    }
    e.rank()
}

/// Determinant of a dense square matrix.
pub fn determinant(mut a: Vec<Vec<Rat>>) -> Rat {
    let n = a.len();
    let mut det = Rat::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rat::zero();
        };
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        det *= &a[col][col];
        let inv = a[col][col].recip();
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] * &inv;
            let pivot = a[col].clone();
            for (x, y) in a[r][col..].iter_mut().zip(&pivot[col..]) {
                *x -= &(&f * y);
            }
        }
    }
    det
}

/// Solves the square system `a x = b`.
pub fn solve(mut a: Vec<Vec<Rat>>, mut b: Vec<Rat>) -> Result<Vec<Rat>> {
    let n = a.len();
    if b.len() != n || a.iter().any(|row| row.len() != n) {
        return Err(Error::IndexOutOfRange("system is not square".into()));
    }
    for col in 0..n {
        let p = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or_else(|| Error::Singular(format!("no pivot in column {col}")))?;
        a.swap(p, col);
        b.swap(p, col);
        let inv = a[col][col].recip();
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] * &inv;
            let pivot = a[col].clone();
            for (x, y) in a[r][col..].iter_mut().zip(&pivot[col..]) {
                *x -= &(&f * y);
            }
            let d = &f * &b[col];
            b[r] -= &d;
        }
    }
    Ok((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64) -> Rat {
        Rat::from_int(n)
    }

    #[test]
    fn rank_and_membership() {
        let v1 = vec![(0, q(1)), (1, q(2))];
        let v2 = vec![(1, q(1)), (2, q(1))];
        let v3 = vec![(0, q(1)), (1, q(4)), (2, q(2))];
        assert_eq!(rank(3, &[v1.clone(), v2.clone(), v3.clone()]), 2);
        let mut e = Echelon::new(3);
        e.insert(&v1);
        e.insert(&v2);
        assert!(e.contains(&v3));
        assert!(!e.contains(&[(2, q(1))]));
    }

    #[test]
    fn dense_routines() {
        let a = vec![vec![q(2), q(1)], vec![q(1), q(3)]];
        assert_eq!(determinant(a.clone()), q(5));
        let x = solve(a, vec![q(3), q(5)]).unwrap();
        assert_eq!(x, vec![Rat::new(4, 5), Rat::new(7, 5)]);
        assert!(solve(vec![vec![q(1), q(2)], vec![q(2), q(4)]], vec![q(0), q(1)]).is_err());
    }

    proptest! {
        #[test]
        fn rank_agrees_with_determinant(entries in proptest::collection::vec(-3i64..4, 9)) {
            let a: Vec<Vec<Rat>> = entries.chunks(3).map(|r| r.iter().map(|&x| q(x)).collect()).collect();
            let rows: Vec<SparseVec> = a
                .iter()
                .map(|r| r.iter().cloned().enumerate().filter(|(_, x)| !x.is_zero()).collect())
                .collect();
            prop_assert_eq!(rank(3, &rows) == 3, !determinant(a).is_zero());
        }
    }
}
