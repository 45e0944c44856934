use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rat::Rat;
use crate::series::HSeries;

/// `x(-r_m) ... x(-r_1) 1` with `r_m >= ... >= r_1 >= 1`, stored as the
/// positive parts `[r_m, ..., r_1]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PbwMonomial(Vec<u32>);

impl PbwMonomial {
    pub fn vacuum() -> PbwMonomial {
        PbwMonomial(Vec::new())
    }

    /// From positive parts in any order.
    pub fn new(mut parts: Vec<u32>) -> PbwMonomial {
        assert!(parts.iter().all(|&p| p >= 1), "modes must be negative");
        parts.sort_unstable_by(|a, b| b.cmp(a));
        PbwMonomial(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_vacuum(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &PbwMonomial) -> PbwMonomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            if a[i] >= b[j] {
                out.push(a[i]);
                i += 1;
            } else {
                out.push(b[j]);
                j += 1;
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        PbwMonomial(out)
    }
}

impl fmt::Display for PbwMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for r in &self.0 {
            write!(f, "x(-{r})")?;
        }
        Ok(())
    }
}

/// A vector of the principal subspace modulo `h^N` and modulo monomials of
/// degree above `D`. Both truncations are ring quotients, so products are exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WElement {
    terms: BTreeMap<PbwMonomial, HSeries>,
    degree_cap: u32,
    order: usize,
}

impl WElement {
    pub fn zero(degree_cap: u32, order: usize) -> WElement {
        WElement { terms: BTreeMap::new(), degree_cap, order }
    }

    pub fn vacuum(degree_cap: u32, order: usize) -> WElement {
        WElement::monomial(PbwMonomial::vacuum(), HSeries::one(order), degree_cap)
    }

    /// `x(-r) 1`.
    pub fn generator(r: u32, degree_cap: u32, order: usize) -> WElement {
        WElement::monomial(PbwMonomial::new(vec![r]), HSeries::one(order), degree_cap)
    }

    pub fn monomial(m: PbwMonomial, c: HSeries, degree_cap: u32) -> WElement {
        let mut w = WElement::zero(degree_cap, c.order());
        w.add_term(m, &c);
        w
    }

    pub fn degree_cap(&self) -> u32 {
        self.degree_cap
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PbwMonomial, &HSeries)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &PbwMonomial) -> HSeries {
        self.terms.get(m).cloned().unwrap_or_else(|| HSeries::zero(self.order))
    }

    /// Adds `c m`; monomials above the degree cap are dropped.
    pub fn add_term(&mut self, m: PbwMonomial, c: &HSeries) {
        assert_eq!(c.order(), self.order, "h-order mismatch");
        if m.degree() > self.degree_cap || c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(e) => {
                *e = &*e + c;
                if e.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    /// Adds `c h^k m`.
    pub fn add_scalar_term(&mut self, m: PbwMonomial, c: &Rat, k: usize) {
        if k < self.order && !c.is_zero() {
            self.add_term(m, &HSeries::monomial(c.clone(), k, self.order));
        }
    }

    fn check(&self, other: &WElement) -> Result<()> {
        if self.order != other.order {
            return Err(Error::TruncationMismatch(self.order, other.order));
        }
        if self.degree_cap != other.degree_cap {
            return Err(Error::ContextMismatch);
        }
        Ok(())
    }

    pub fn try_add(&self, other: &WElement) -> Result<WElement> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &WElement) -> Result<WElement> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &WElement) -> Result<WElement> {
        self.check(other)?;
        let mut out = WElement::zero(self.degree_cap, self.order);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if a.degree() + b.degree() <= self.degree_cap {
                    out.add_term(a.mul(b), &(ca * cb));
                }
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> WElement {
        self.map_coeffs(|c| -c)
    }

    pub fn scale(&self, c: &Rat) -> WElement {
        self.map_coeffs(|s| s.scale(c))
    }

    pub fn scale_series(&self, c: &HSeries) -> WElement {
        self.map_coeffs(|s| s * c)
    }

    /// Multiplication by `h^k`.
    pub fn shift_h(&self, k: usize) -> WElement {
        self.map_coeffs(|s| s.shift(k))
    }

    fn map_coeffs(&self, f: impl Fn(&HSeries) -> HSeries) -> WElement {
        let mut out = WElement::zero(self.degree_cap, self.order);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &f(c));
        }
        out
    }

    /// Reduction modulo `h`.
    pub fn classical_limit(&self) -> WElement {
        self.with_order(1)
    }

    /// Re-truncation to a lower (or padded to a higher) `h`-order.
    pub fn with_order(&self, order: usize) -> WElement {
        let mut out = WElement::zero(self.degree_cap, order);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &c.truncate(order));
        }
        out
    }

    pub fn with_degree_cap(&self, degree_cap: u32) -> WElement {
        let mut out = WElement::zero(degree_cap, self.order);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    /// The `h^k` coefficient as a classical vector.
    pub fn h_slice(&self, k: usize) -> BTreeMap<PbwMonomial, Rat> {
        self.terms.iter().filter(|(_, c)| !c.coeff(k).is_zero()).map(|(m, c)| (m.clone(), c.coeff(k).clone())).collect()
    }

    /// Splits by `deg - (power of h)`, the grading preserved by quasi-particles.
    pub fn weighted_components(&self) -> BTreeMap<i64, WElement> {
        let mut out: BTreeMap<i64, WElement> = BTreeMap::new();
        for (m, c) in &self.terms {
            for (k, a) in c.coeffs().iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let w = m.degree() as i64 - k as i64;
                out.entry(w).or_insert_with(|| WElement::zero(self.degree_cap, self.order)).add_scalar_term(
                    m.clone(),
                    a,
                    k,
                );
            }
        }
        out
    }

    /// Smallest power of `h` with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.terms.values().filter_map(HSeries::valuation).min()
    }
}

impl fmt::Display for WElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (m, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "[{c}] {m}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use proptest::prelude::*;

    #[test]
    fn monomial_product_sorts() {
        let a = PbwMonomial::new(vec![1, 3]);
        assert_eq!(a.parts(), &[3, 1]);
        assert_eq!(a.mul(&PbwMonomial::new(vec![2])).parts(), &[3, 2, 1]);
        assert_eq!(a.to_string(), "x(-3)x(-1)");
        assert_eq!(a.degree(), 4);
    }

    #[test]
    fn classical_limit_drops_h() {
        let mut w = WElement::generator(1, 4, 3);
        w.add_scalar_term(PbwMonomial::new(vec![2]), &Rat::one(), 1);
        let c = w.classical_limit();
        assert_eq!(c, WElement::generator(1, 4, 1));
        assert_eq!(WElement::vacuum(3, 2).classical_limit(), WElement::vacuum(3, 1));
    }

    #[test]
    fn degree_cap_truncates() {
        let x2 = WElement::generator(2, 3, 1);
        let x1 = WElement::generator(1, 3, 1);
        assert!(x2.try_mul(&x2).unwrap().is_zero());
        assert_eq!(x2.try_mul(&x1).unwrap().len(), 1);
    }

    fn element() -> impl Strategy<Value = WElement> {
        proptest::collection::vec((proptest::collection::vec(1u32..4, 0..3), -3i64..4, 0usize..3), 0..5).prop_map(
            |terms| {
                let mut w = WElement::zero(6, 3);
                for (parts, c, k) in terms {
                    w.add_scalar_term(PbwMonomial::new(parts), &Rat::from_int(c), k);
                }
                w
            },
        )
    }

    proptest! {
        #[test]
        fn commutative_associative(a in element(), b in element(), c in element()) {
            prop_assert_eq!(a.try_mul(&b).unwrap(), b.try_mul(&a).unwrap());
            let ab_c = a.try_mul(&b).unwrap().try_mul(&c).unwrap();
            let a_bc = a.try_mul(&b.try_mul(&c).unwrap()).unwrap();
            prop_assert_eq!(ab_c, a_bc);
        }
    }
}
