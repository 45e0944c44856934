//! The ideals generated by the coefficients `R^t(p)` of `x^t_(k+1)(z)`, the
//! level-k quotient and exact membership tests.
//!
//! Everything is graded by the weighted degree `deg - (power of h)`, which the
//! quasi-particles preserve. At `t = 0` the generators carry no `h` at all.

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{Echelon, SparseVec};
use crate::partitions::partitions;
use crate::principal::{enumerate_qp_basis_degree, qp_series_coefficient, shifted_product, PbwMonomial, WElement};
use crate::rat::Rat;
use crate::relations::ShiftMultiset;
use crate::series::{LinearForm, ScalarContext};
use crate::vertex::{y_apply, VertexResult};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdealSpec {
    pub level: u32,
    pub t: Rat,
    pub degree_cap: u32,
    pub order: usize,
}

impl IdealSpec {
    pub fn new(level: u32, t: Rat, degree_cap: u32, order: usize) -> Result<IdealSpec> {
        if level == 0 {
            return Err(Error::IndexOutOfRange("level must be at least 1".into()));
        }
        Ok(IdealSpec { level, t, degree_cap, order })
    }

    /// `R^t(p) = x^t_(k+1)(-p) 1`.
    pub fn generator(&self, p: u32) -> Result<WElement> {
        qp_series_coefficient(self.level + 1, &self.t, p, self.order, self.degree_cap)
    }
}

/// Spanning vectors `b R^t(p) 1` of one weighted degree.
#[derive(Clone, Debug)]
pub struct GradedSpan {
    pub degree: u32,
    pub vectors: Vec<WElement>,
    /// Rank of the `h^0` slices, taken in the PBW basis of degree `degree`.
    pub rank_h0: usize,
}

fn monomial_vector(parts: &[u32], degree_cap: u32, order: usize) -> WElement {
    WElement::monomial(PbwMonomial::new(parts.to_vec()), crate::HSeries::one(order), degree_cap)
}

/// Products `b R(p)` of weighted degree `d`, generators cached by `p`.
fn span_vectors(spec: &IdealSpec, d: u32, gens: &mut HashMap<u32, WElement>) -> Result<Vec<WElement>> {
    let mut out = Vec::new();
    for p in spec.level + 1..=d {
        if let std::collections::hash_map::Entry::Vacant(e) = gens.entry(p) {
            e.insert(spec.generator(p)?);
        }
        let r = &gens[&p];
        for b in partitions(d - p) {
            let v = monomial_vector(&b, spec.degree_cap, spec.order).try_mul(r)?;
            if !v.is_zero() {
                out.push(v);
            }
        }
    }
    Ok(out)
}

pub fn ideal_graded_span(spec: &IdealSpec, d: u32) -> Result<GradedSpan> {
    if d > spec.degree_cap {
        return Err(Error::DegreeOverflow { degree: d, cap: spec.degree_cap });
    }
    let vectors = span_vectors(spec, d, &mut HashMap::new())?;
    let index: HashMap<PbwMonomial, usize> =
        partitions(d).into_iter().enumerate().map(|(i, p)| (PbwMonomial::new(p), i)).collect();
    let mut ech = Echelon::new(index.len());
    for v in &vectors {
        let row: SparseVec = v.h_slice(0).into_iter().map(|(m, c)| (index[&m], c)).collect();
        ech.insert(&row);
        if ech.rank() == index.len() {
            break;
        }
    }
    Ok(GradedSpan { degree: d, vectors, rank_h0: ech.rank() })
}

/// `dim` of the degree-`d` part of the level-`k` quotient at `t = 0`, read off
/// from the rank of the classical slice of the ideal.
pub fn quotient_graded_dim(k: u32, d: u32) -> Result<usize> {
    let spec = IdealSpec::new(k, Rat::zero(), d, 1)?;
    let span = ideal_graded_span(&spec, d)?;
    Ok(partitions(d).len() - span.rank_h0)
}

/// Quotient dimensions for `d = 0..=max_degree`, one task per degree.
pub fn quotient_graded_dims(k: u32, max_degree: u32) -> Result<Vec<usize>> {
    (0..=max_degree).into_par_iter().map(|d| quotient_graded_dim(k, d)).collect()
}

/// Basis monomials of degree `d` with every charge at most `k`.
pub fn quotient_basis_count(k: u32, d: u32) -> usize {
    enumerate_qp_basis_degree(d, Some(k)).len()
}

/// Basis monomials of degree `d` containing a charge above `k`.
pub fn ideal_basis_count(k: u32, d: u32) -> usize {
    enumerate_qp_basis_degree(d, None).into_iter().filter(|q| q.max_charge() > k).count()
}

/// Whether `w` lies in the ideal modulo `h^N`, tested separately in each
/// weighted degree against `h^e b R^t(p)`.
pub fn membership_test(w: &WElement, spec: &IdealSpec) -> Result<bool> {
    if w.order() != spec.order {
        return Err(Error::TruncationMismatch(w.order(), spec.order));
    }
    if w.degree_cap() != spec.degree_cap {
        return Err(Error::ContextMismatch);
    }
    let n = spec.order as u32;
    let mut gens = HashMap::new();
    for (wd, comp) in w.weighted_components() {
        if comp.is_zero() {
            continue;
        }
        if wd < (spec.level + 1) as i64 {
            return Ok(false);
        }
        let wd = wd as u32;
        if !spec.t.is_zero() && wd + n - 1 > spec.degree_cap {
            return Err(Error::OutsideCaps(format!(
                "weighted degree {wd} needs degree cap {} at h-order {n}",
                wd + n - 1
            )));
        }
        let mut generators = Vec::new();
        for e in 0..spec.order {
            let top = wd + e as u32;
            if top > spec.degree_cap {
                break;
            }
            for v in span_vectors(spec, top, &mut gens)? {
                let g = v.shift_h(e);
                if !g.is_zero() {
                    generators.push(g);
                }
            }
        }
        let mut index: HashMap<(PbwMonomial, usize), usize> = HashMap::new();
        let mut flatten = |x: &WElement| -> SparseVec {
            let mut out = Vec::new();
            for (m, c) in x.terms() {
                for (f, a) in c.coeffs().iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    let next = index.len();
                    let i = *index.entry((m.clone(), f)).or_insert(next);
                    out.push((i, a.clone()));
                }
            }
            out
        };
        let target = flatten(&comp);
        let rows: Vec<SparseVec> = generators.iter().map(&mut flatten).collect();
        let mut ech = Echelon::new(index.len());
        for r in &rows {
            ech.insert(r);
        }
        if !ech.contains(&target) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Smallest `s < N` with `h^s w` in the ideal modulo `h^N`.
pub fn closure_exponent(w: &WElement, spec: &IdealSpec) -> Result<Option<usize>> {
    for s in 0..spec.order {
        if membership_test(&w.shift_h(s), spec)? {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

/// `x_(k+l+1)(z) = x_(l)(z + (k+1)th) x_(k+1)(z)`, first as an identity of
/// shift multisets, then on a few coefficients of the series on the vacuum.
pub fn factorization_check(k: u32, l: u32, t: &Rat) -> Result<bool> {
    if k == 0 || l == 0 {
        return Err(Error::IndexOutOfRange(format!("factorization needs k, l >= 1, got k={k}, l={l}")));
    }
    let lhs = ShiftMultiset::quasi_particle(k + l + 1, 0);
    let rhs = ShiftMultiset::quasi_particle(l, (k + 1) as i64).union(&ShiftMultiset::quasi_particle(k + 1, 0));
    if lhs != rhs {
        return Ok(false);
    }
    let (window, order) = (2u32, 3usize);
    let cap = window + k + l + 1 + order as u32 - 1;
    let a = shifted_product(&lhs.shifts(t), window, cap, order);
    let b = shifted_product(&rhs.shifts(t), window, cap, order);
    Ok(a == b)
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneratorClosureReport {
    pub level: u32,
    /// `(p, agrees)` for every `p` in `k+1..=D`.
    pub coefficients: Vec<(u32, bool)>,
    pub no_negative_powers: bool,
}

impl GeneratorClosureReport {
    pub fn passed(&self) -> bool {
        self.no_negative_powers && self.coefficients.iter().all(|(_, ok)| *ok)
    }
}

/// `Y(x(-1)^{k+1} 1, z) 1 = sum_p R^0(p) 1 z^{p-k-1}`, computed through the
/// vertex map and compared with the generators.
pub fn principal_generator_closure(k: u32, degree_cap: u32, order: usize) -> Result<GeneratorClosureReport> {
    let ctx: Arc<ScalarContext> = ScalarContext::new(&[("z", None)], order);
    let a: Vec<LinearForm> = (0..=k).map(|_| LinearForm::zero()).collect();
    let y = y_apply(&a, 0, &VertexResult::vacuum(&ctx), &Rat::zero())?;
    let spec = IdealSpec::new(k, Rat::zero(), degree_cap, order)?;
    let mut coefficients = Vec::new();
    for p in k + 1..=degree_cap {
        let got = y.coefficient(&[(p - k - 1) as i32], degree_cap)?;
        coefficients.push((p, got == spec.generator(p)?));
    }
    let mut no_negative_powers = true;
    for j in 1..=3 {
        no_negative_powers &= y.coefficient(&[-j], degree_cap)?.is_zero();
    }
    Ok(GeneratorClosureReport { level: k, coefficients, no_negative_powers })
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeTwoReport {
    pub t: Rat,
    pub window: u32,
    pub h0_matches: bool,
    pub h1_matches: bool,
    pub h2_matches: bool,
    /// Whether some `h^1` coefficient fails to lie in the classical level-1 ideal.
    pub h1_outside_ideal: bool,
    /// Whether some `h^2` coefficient fails to lie in the classical level-1 ideal.
    pub h2_outside_ideal: bool,
}

impl DegreeTwoReport {
    pub fn passed(&self) -> bool {
        self.h0_matches && self.h1_matches && self.h2_matches
    }
}

/// Classical `sum_{r,s} w(r, s) x(-r) x(-s)` over `r + s = n`, `r, s >= 1`.
fn quadratic(n: u32, degree_cap: u32, w: impl Fn(u32, u32) -> Rat) -> WElement {
    let mut out = WElement::zero(degree_cap, 1);
    for r in 1..n {
        out.add_scalar_term(PbwMonomial::new(vec![r, n - r]), &w(r, n - r), 0);
    }
    out
}

fn slice_as_classical(w: &WElement, k: usize, degree_cap: u32) -> WElement {
    let mut out = WElement::zero(degree_cap, 1);
    for (m, c) in w.h_slice(k) {
        out.add_scalar_term(m, &c, 0);
    }
    out
}

/// The `h^0, h^1, h^2` coefficients of `x^t_(2)(z) 1` on `z^0..z^window`
/// against `x(z)^2`, `(t/2) d/dz x(z)^2` and `(t^2/2) x(z) x''(z)`.
pub fn tneq0_degree2_expansion(t: &Rat, order: usize, window: u32) -> Result<DegreeTwoReport> {
    if t.is_zero() {
        return Err(Error::IndexOutOfRange("the degree-two expansion needs t != 0".into()));
    }
    if order < 3 {
        return Err(Error::TruncationMismatch(order, 3));
    }
    let cap = window + 1 + order as u32;
    let got = shifted_product(&[Rat::zero(), t.clone()], window, cap, order);
    let half = Rat::new(1, 2);
    let t1 = t * &half;
    let t2 = &(t * t) * &half;
    let level1 = IdealSpec::new(1, Rat::zero(), cap, 1)?;
    let mut report = DegreeTwoReport {
        t: t.clone(),
        window,
        h0_matches: true,
        h1_matches: true,
        h2_matches: true,
        h1_outside_ideal: false,
        h2_outside_ideal: false,
    };
    for (j, w) in got.iter().enumerate() {
        let j = j as u32;
        // x(z)^2 = sum_n z^{n-2} sum_{r+s=n} x(-r)x(-s)
        let e0 = quadratic(j + 2, cap, |_, _| Rat::from_int(1));
        let e1 = quadratic(j + 3, cap, |_, _| &t1 * &Rat::from_int(j as i64 + 1));
        // x''(z) contributes (s-1)(s-2) x(-s) z^{s-3}; symmetrize over r, s
        let e2 = quadratic(j + 4, cap, |r, s| {
            let d = |s: u32| Rat::from_int((s as i64 - 1) * (s as i64 - 2));
            &t2 * &(&(&d(r) + &d(s)) * &half)
        });
        let s0 = slice_as_classical(w, 0, cap);
        let s1 = slice_as_classical(w, 1, cap);
        let s2 = slice_as_classical(w, 2, cap);
        report.h0_matches &= s0 == e0;
        report.h1_matches &= s1 == e1;
        report.h2_matches &= s2 == e2;
        report.h1_outside_ideal |= !membership_test(&s1, &level1)?;
        report.h2_outside_ideal |= !membership_test(&s2, &level1)?;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::principal::qp_monomial_to_w;
    use num_traits::One;
    use proptest::prelude::*;

    fn spec0(k: u32, d: u32, n: usize) -> IdealSpec {
        IdealSpec::new(k, Rat::zero(), d, n).unwrap()
    }

    /// Partitions of `d` with parts differing by at least 2 and at most `k`
    /// parts equal to 1 in any window `(j, j+1)`: the Gordon condition.
    fn gordon_count(k: u32, d: u32) -> usize {
        fn go(rest: u32, max: u32, k: u32, tail: &mut Vec<u32>) -> usize {
            if rest == 0 {
                return 1;
            }
            let mut n = 0;
            for part in (1..=rest.min(max)).rev() {
                tail.push(part);
                let ok = {
                    let cnt = tail.iter().filter(|&&x| x == part || x == part + 1).count();
                    cnt as u32 <= k
                };
                if ok {
                    n += go(rest - part, part, k, tail);
                }
                tail.pop();
            }
            n
        }
        go(d, d, k, &mut Vec::new())
    }

    #[test]
    fn low_degree_spans() {
        let s = ideal_graded_span(&spec0(1, 6, 1), 2).unwrap();
        assert_eq!(s.vectors.len(), 1);
        assert_eq!(s.vectors[0], monomial_vector(&[1, 1], 6, 1));
        assert!(ideal_graded_span(&spec0(1, 6, 1), 1).unwrap().vectors.is_empty());
        assert!(ideal_graded_span(&spec0(1, 6, 1), 0).unwrap().vectors.is_empty());
        assert_eq!(ideal_graded_span(&spec0(1, 6, 1), 4).unwrap().rank_h0, 5 - 2);
        assert!(ideal_graded_span(&spec0(1, 3, 1), 4).is_err());
    }

    #[test]
    fn level_one_dims() {
        let dims: Vec<usize> = (0..=4).map(|d| quotient_graded_dim(1, d).unwrap()).collect();
        assert_eq!(dims, vec![1, 1, 1, 1, 2]);
        assert_eq!(quotient_graded_dim(5, 4).unwrap(), 5);
    }

    #[test]
    fn complementarity() {
        for k in 1..=3 {
            for d in 0..=10 {
                let rank = ideal_graded_span(&spec0(k, d, 1), d).unwrap().rank_h0;
                let quotient = quotient_basis_count(k, d);
                assert_eq!(rank + quotient, partitions(d).len(), "k={k} d={d}");
                assert_eq!(rank, ideal_basis_count(k, d), "k={k} d={d}");
                assert_eq!(quotient, gordon_count(k, d), "k={k} d={d}");
            }
        }
    }

    #[test]
    fn parallel_dims_agree() {
        let dims = quotient_graded_dims(2, 8).unwrap();
        for (d, n) in dims.iter().enumerate() {
            assert_eq!(*n, gordon_count(2, d as u32));
        }
    }

    #[test]
    fn membership_examples() {
        let s = spec0(1, 6, 2);
        assert!(membership_test(&s.generator(2).unwrap(), &s).unwrap());
        assert!(!membership_test(&WElement::vacuum(6, 2), &s).unwrap());
        assert!(!membership_test(&WElement::generator(3, 6, 2), &s).unwrap());
        let mixed = WElement::generator(4, 6, 2).try_add(&s.generator(3).unwrap()).unwrap();
        assert!(!membership_test(&mixed, &s).unwrap());
        assert!(membership_test(&WElement::zero(6, 2), &s).unwrap());
        assert!(membership_test(&WElement::vacuum(5, 2), &s).is_err());
    }

    #[test]
    fn high_charge_basis_vectors_lie_in_the_ideal() {
        let s = spec0(1, 8, 1);
        let mut seen = 0;
        for d in 0..=8 {
            for q in enumerate_qp_basis_degree(d, None) {
                let w = qp_monomial_to_w(&q, &Rat::zero(), 1, 8).unwrap();
                let inside = membership_test(&w, &s).unwrap();
                assert_eq!(inside, q.max_charge() > 1, "{q}");
                seen += inside as usize;
            }
        }
        assert!(seen > 10);
    }

    #[test]
    fn closure_exponent_finds_the_h_power() {
        let s = spec0(1, 6, 3);
        let r = s.generator(2).unwrap();
        assert_eq!(closure_exponent(&r, &s).unwrap(), Some(0));
        // x(-1) is outside, and h^s x(-1) stays outside at every s < N
        assert_eq!(closure_exponent(&WElement::generator(1, 6, 3), &s).unwrap(), None);
    }

    #[test]
    fn nonzero_t_membership_of_generators() {
        let s = IdealSpec::new(1, Rat::one(), 8, 2).unwrap();
        for p in 2..=6 {
            let r = s.generator(p).unwrap();
            assert!(membership_test(&r, &s).unwrap());
        }
        let too_small = IdealSpec::new(1, Rat::one(), 6, 2).unwrap();
        let r = too_small.generator(6).unwrap();
        assert!(membership_test(&r, &too_small).is_err());
    }

    #[test]
    fn factorization_examples() {
        for t in [Rat::zero(), Rat::one(), Rat::new(-3, 2)] {
            assert!(factorization_check(2, 3, &t).unwrap());
            for k in 1..=6 {
                for l in 1..=(7 - k) {
                    assert!(factorization_check(k, l, &t).unwrap(), "k={k} l={l}");
                }
            }
        }
        assert!(factorization_check(0, 1, &Rat::one()).is_err());
    }

    #[test]
    fn generator_closure() {
        for k in 1..=3 {
            let r = principal_generator_closure(k, 7, 2).unwrap();
            assert!(r.passed(), "{r:?}");
        }
        let s = spec0(1, 6, 1);
        // z^1 coefficient at k = 1 is 2 x(-2)x(-1)
        let expected = monomial_vector(&[2, 1], 6, 1).scale(&Rat::from_int(2));
        assert_eq!(s.generator(3).unwrap(), expected);
        assert_eq!(s.generator(2).unwrap(), monomial_vector(&[1, 1], 6, 1));
    }

    #[test]
    fn degree_two_expansion() {
        for t in [Rat::one(), Rat::from_int(2), Rat::new(-1, 3)] {
            let r = tneq0_degree2_expansion(&t, 3, 5).unwrap();
            assert!(r.passed(), "{r:?}");
            assert!(!r.h1_outside_ideal);
            assert!(r.h2_outside_ideal);
        }
        assert!(tneq0_degree2_expansion(&Rat::zero(), 3, 5).is_err());
    }

    #[test]
    fn quotient_basis_is_independent_mod_the_ideal() {
        // the quotient basis together with the ideal span fills each degree
        let d = 7;
        let s = spec0(2, d, 1);
        let span = ideal_graded_span(&s, d).unwrap();
        let index: HashMap<PbwMonomial, usize> =
            partitions(d).into_iter().enumerate().map(|(i, p)| (PbwMonomial::new(p), i)).collect();
        let mut ech = Echelon::new(index.len());
        let mut push = |w: &WElement| {
            let row: SparseVec = w.h_slice(0).into_iter().map(|(m, c)| (index[&m], c)).collect();
            ech.insert(&row);
        };
        for v in &span.vectors {
            push(v);
        }
        for q in enumerate_qp_basis_degree(d, Some(2)) {
            push(&qp_monomial_to_w(&q, &Rat::zero(), 1, d).unwrap());
        }
        assert_eq!(ech.rank(), index.len());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn ideal_closed_under_multiplication(
            parts in proptest::collection::vec(1u32..4, 0..3),
            p in 2u32..5,
            b in proptest::collection::vec(1u32..3, 0..2),
            c in -3i64..4,
        ) {
            let s = spec0(1, 9, 2);
            let v = monomial_vector(&b, 9, 2).try_mul(&s.generator(p).unwrap()).unwrap();
            let w = monomial_vector(&parts, 9, 2).try_mul(&v).unwrap().scale(&Rat::from_int(c));
            prop_assert!(membership_test(&w, &s).unwrap());
        }
    }
}
