//! Quasi-particle monomials, the difference conditions selecting the basis, and
//! their images in PBW coordinates.

use std::collections::HashMap;
use std::fmt;

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::determinant;
use crate::partitions::partitions;
use crate::rat::Rat;
use crate::series::HSeries;

use super::pbw::{PbwMonomial, WElement};
use super::wseries::shifted_product;

/// `x_(m_r)(n_r) ... x_(m_1)(n_1)`, stored in the order `s = 1..r`, i.e.
/// `(m_1, n_1)` first. Display and serialization use the written order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QPMonomial {
    parts: Vec<(u32, i64)>,
}

impl QPMonomial {
    pub fn vacuum() -> QPMonomial {
        QPMonomial { parts: Vec::new() }
    }

    /// From `(m_1, n_1), ..., (m_r, n_r)`.
    pub fn from_indexed(parts: Vec<(u32, i64)>) -> Result<QPMonomial> {
        for w in parts.windows(2) {
            if w[1].0 > w[0].0 {
                return Err(Error::IndexOutOfRange(format!(
                    "charges must be non-increasing in s, got {} then {}",
                    w[0].0, w[1].0
                )));
            }
        }
        for &(m, n) in &parts {
            if m == 0 || n > -1 {
                return Err(Error::IndexOutOfRange(format!("invalid quasi-particle ({m},{n})")));
            }
        }
        Ok(QPMonomial { parts })
    }

    /// From the written order `(m_r, n_r), ..., (m_1, n_1)`.
    pub fn from_written(parts: &[(u32, i64)]) -> Result<QPMonomial> {
        QPMonomial::from_indexed(parts.iter().rev().cloned().collect())
    }

    /// `(m_s, n_s)` for `s = 1..r`.
    pub fn indexed(&self) -> &[(u32, i64)] {
        &self.parts
    }

    pub fn written(&self) -> Vec<(u32, i64)> {
        self.parts.iter().rev().cloned().collect()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.parts.iter().map(|&(_, n)| (-n) as u32).sum()
    }

    pub fn total_charge(&self) -> u32 {
        self.parts.iter().map(|&(m, _)| m).sum()
    }

    pub fn max_charge(&self) -> u32 {
        self.parts.iter().map(|&(m, _)| m).max().unwrap_or(0)
    }

    fn sort_key(&self) -> (u32, usize, Vec<u32>, Vec<i64>) {
        (
            self.degree(),
            self.parts.len(),
            self.parts.iter().map(|p| p.0).collect(),
            self.parts.iter().map(|p| p.1).collect(),
        )
    }
}

impl fmt::Display for QPMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "1");
        }
        for (m, n) in self.written() {
            write!(f, "x_({m})({n})")?;
        }
        Ok(())
    }
}

impl Serialize for QPMonomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.written().iter().map(|&(m, n)| [m as i64, n]).collect::<Vec<_>>().serialize(s)
    }
}

impl<'de> Deserialize<'de> for QPMonomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<[i64; 2]>::deserialize(d)?;
        let parts: Vec<(u32, i64)> = v.iter().map(|&[m, n]| (m.max(0) as u32, n)).collect();
        QPMonomial::from_written(&parts).map_err(serde::de::Error::custom)
    }
}

/// Difference conditions: for `s = 1..r-1`, `n_{s+1} <= n_s - 2 m_s` when
/// `m_{s+1} = m_s`; for every `s = 1..r`, `n_s <= -m_s - 2(s-1) m_s`; and all
/// charges at most `max_charge` when given.
pub fn is_basis_monomial(q: &QPMonomial, max_charge: Option<u32>) -> bool {
    let p = &q.parts;
    for (i, &(m, n)) in p.iter().enumerate() {
        let s = i as i64 + 1;
        if n > -(m as i64) - 2 * (s - 1) * m as i64 {
            return false;
        }
        if let Some(k) = max_charge {
            if m > k {
                return false;
            }
        }
        if i + 1 < p.len() {
            let (m1, n1) = p[i + 1];
            if m1 == m && n1 > n - 2 * m as i64 {
                return false;
            }
        }
    }
    true
}

/// Basis monomials of degree exactly `d`, ordered by number of quasi-particles,
/// then charges `(m_1, ..., m_r)`, then energies `(n_1, ..., n_r)`.
pub fn enumerate_qp_basis_degree(d: u32, max_charge: Option<u32>) -> Vec<QPMonomial> {
    fn go(rem: i64, prev: Option<(u32, i64)>, max_charge: u32, cur: &mut Vec<(u32, i64)>, out: &mut Vec<QPMonomial>) {
        if rem == 0 {
            out.push(QPMonomial { parts: cur.clone() });
            return;
        }
        let s = cur.len() as i64 + 1;
        let top = prev.map_or(max_charge, |(m, _)| m.min(max_charge));
        for m in 1..=top {
            let mut bound = -(m as i64) * (2 * s - 1);
            if let Some((pm, pn)) = prev {
                if pm == m {
                    bound = bound.min(pn - 2 * m as i64);
                }
            }
            let mut n = bound;
            while -n <= rem {
                cur.push((m, n));
                go(rem + n, Some((m, n)), max_charge, cur, out);
                cur.pop();
                n -= 1;
            }
        }
    }
    let mut out = Vec::new();
    go(d as i64, None, max_charge.unwrap_or(d).min(d.max(1)), &mut Vec::new(), &mut out);
    out.sort_by_key(QPMonomial::sort_key);
    out
}

/// Basis monomials of degree at most `max_degree`, ordered by degree first.
pub fn enumerate_qp_basis(max_degree: u32, max_charge: Option<u32>) -> Vec<QPMonomial> {
    (0..=max_degree).flat_map(|d| enumerate_qp_basis_degree(d, max_charge)).collect()
}

/// `x^t_(m)(-r)`: the `u^{r-m}` coefficient of
/// `x^+(u) x^+(u+th) ... x^+(u+(m-1)th)` applied to the vacuum.
pub fn qp_series_coefficient(m: u32, t: &Rat, r: u32, order: usize, degree_cap: u32) -> Result<WElement> {
    if m == 0 || r < m {
        return Err(Error::UndefinedCoefficient(format!("x^t_({m})(-{r}) needs r >= m >= 1")));
    }
    let shifts: Vec<Rat> = (0..m).map(|j| t * &Rat::from_int(j as i64)).collect();
    Ok(shifted_product(&shifts, r - m, degree_cap, order).pop().expect("nonempty"))
}

/// The vector `q 1` in PBW coordinates.
pub fn qp_monomial_to_w(q: &QPMonomial, t: &Rat, order: usize, degree_cap: u32) -> Result<WElement> {
    if q.degree() > degree_cap {
        return Err(Error::DegreeOverflow { degree: q.degree(), cap: degree_cap });
    }
    let mut acc = WElement::vacuum(degree_cap, order);
    for &(m, n) in &q.parts {
        acc = acc.try_mul(&qp_series_coefficient(m, t, (-n) as u32, order, degree_cap)?)?;
    }
    Ok(acc)
}

/// Reduction modulo `h`.
pub fn classical_limit(w: &WElement) -> WElement {
    w.classical_limit()
}

/// Coordinates of the basis vectors `b 1` (columns) in the PBW basis (rows).
#[derive(Clone, Debug)]
pub struct TransitionMatrix {
    pub rows: Vec<PbwMonomial>,
    pub cols: Vec<QPMonomial>,
    /// `entries[i][j]`: coefficient of `rows[i]` in `cols[j] 1`.
    pub entries: Vec<Vec<HSeries>>,
    /// Determinant of the `h = 0` block of each degree `0..=D`.
    pub classical_block_dets: Vec<Rat>,
}

impl TransitionMatrix {
    pub fn classical_blocks_invertible(&self) -> bool {
        self.classical_block_dets.iter().all(|d| !d.is_zero())
    }
}

pub fn transition_matrix(max_degree: u32, t: &Rat, order: usize) -> Result<TransitionMatrix> {
    let rows: Vec<PbwMonomial> =
        (0..=max_degree).flat_map(|d| partitions(d).into_iter().map(PbwMonomial::new)).collect();
    let cols = enumerate_qp_basis(max_degree, None);
    let row_index: HashMap<&PbwMonomial, usize> = rows.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let images = cols.par_iter().map(|q| qp_monomial_to_w(q, t, order, max_degree)).collect::<Result<Vec<_>>>()?;
    let mut entries = vec![vec![HSeries::zero(order); cols.len()]; rows.len()];
    for (j, w) in images.iter().enumerate() {
        for (m, c) in w.terms() {
            entries[row_index[m]][j] = c.clone();
        }
    }
    let classical_block_dets = (0..=max_degree)
        .map(|d| {
            let r: Vec<usize> = (0..rows.len()).filter(|&i| rows[i].degree() == d).collect();
            let c: Vec<usize> = (0..cols.len()).filter(|&j| cols[j].degree() == d).collect();
            if r.len() != c.len() {
                return Rat::zero();
            }
            determinant(r.iter().map(|&i| c.iter().map(|&j| entries[i][j].coeff(0).clone()).collect()).collect())
        })
        .collect();
    Ok(TransitionMatrix { rows, cols, entries, classical_block_dets })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn w(parts: &[(u32, i64)]) -> QPMonomial {
        QPMonomial::from_written(parts).unwrap()
    }

    #[test]
    fn difference_conditions() {
        assert!(is_basis_monomial(&w(&[(1, -3), (1, -1)]), None));
        assert!(!is_basis_monomial(&w(&[(1, -2), (1, -1)]), None));
        assert!(!is_basis_monomial(&w(&[(1, -2), (2, -2)]), None));
        assert!(!is_basis_monomial(&w(&[(2, -2)]), Some(1)));
        assert!(QPMonomial::from_written(&[(2, -3), (1, -1)]).is_err());
    }

    #[test]
    fn degree_four() {
        let b = enumerate_qp_basis_degree(4, None);
        let written: Vec<_> = b.iter().map(QPMonomial::written).collect();
        assert_eq!(written, vec![vec![(1, -4)], vec![(2, -4)], vec![(3, -4)], vec![(4, -4)], vec![(1, -3), (1, -1)]]);
        let b1 = enumerate_qp_basis_degree(4, Some(1));
        assert_eq!(b1.iter().map(QPMonomial::written).collect::<Vec<_>>(), vec![vec![(1, -4)], vec![(1, -3), (1, -1)]]);
        assert_eq!(enumerate_qp_basis(0, None), vec![QPMonomial::vacuum()]);
    }

    #[test]
    fn enumeration_agrees_with_predicate() {
        for d in 0..=9 {
            for q in enumerate_qp_basis_degree(d, None) {
                assert!(is_basis_monomial(&q, None), "{q}");
                assert_eq!(q.degree(), d);
            }
        }
    }

    #[test]
    fn quasi_particle_coefficients() {
        let t = Rat::new(3, 2);
        assert_eq!(qp_series_coefficient(1, &t, 4, 3, 6).unwrap(), WElement::generator(4, 6, 3));
        let sq = qp_series_coefficient(2, &Rat::zero(), 2, 3, 6).unwrap();
        let x1 = WElement::generator(1, 6, 3);
        assert_eq!(sq, x1.try_mul(&x1).unwrap());
        assert!(matches!(qp_series_coefficient(3, &t, 2, 3, 6), Err(Error::UndefinedCoefficient(_))));
    }

    #[test]
    fn charge_two_at_unit_shift() {
        // x^+(u) x^+(u+h) at u^0 = x(-1) sum_s x(-s) h^{s-1}
        let v = qp_series_coefficient(2, &Rat::one(), 2, 4, 8).unwrap();
        for k in 0..4u32 {
            let m = PbwMonomial::new(vec![1, k + 1]);
            assert_eq!(*v.coeff(&m).coeff(k as usize), Rat::one());
        }
        assert_eq!(v.len(), 4);
        assert_eq!(v.classical_limit(), qp_series_coefficient(2, &Rat::zero(), 2, 1, 8).unwrap());
    }

    #[test]
    fn small_transition_matrices() {
        let tm = transition_matrix(1, &Rat::one(), 2);
        let tm = tm.unwrap();
        assert_eq!(tm.rows.len(), 2);
        assert!(tm.entries[1][1].is_one());
        let tm = transition_matrix(2, &Rat::zero(), 1).unwrap();
        // x_(1)(-2) -> x(-2), x_(2)(-2) -> x(-1)^2
        assert_eq!(tm.classical_block_dets[2].clone().pow(2), Rat::one());
        assert!(tm.classical_blocks_invertible());
    }

    #[test]
    fn json_uses_written_order() {
        let q = w(&[(1, -3), (2, -2)]);
        assert_eq!(serde_json::to_string(&q).unwrap(), "[[1,-3],[2,-2]]");
        let back: QPMonomial = serde_json::from_str("[[1,-3],[2,-2]]").unwrap();
        assert_eq!(back, q);
    }
}
