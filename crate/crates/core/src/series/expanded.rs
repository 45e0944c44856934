//! Multivariable Laurent-type series over truncated `h`-series.
//!
//! A term is `c * h^k * prod x_i^{e_i}` with `k < N`. Every variable is either
//! uncapped (any exponent, typically the left variable of an expansion such as
//! `z`) or capped. For a capped variable the weight `e_i + k` must be
//! nonnegative and terms with weight above the cap are discarded. Weights are
//! additive under multiplication, so dropping them is a ring homomorphism and
//! all retained coefficients are exact. A coefficient at exponent `e_i` is fully
//! determined (for all `h`-orders) once `e_i + N - 1 <= cap`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rat::Rat;

use super::hseries::HSeries;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarContext {
    names: Vec<String>,
    caps: Vec<Option<i32>>,
    order: usize,
}

impl ScalarContext {
    /// `vars` lists `(name, cap)`; `None` marks an uncapped variable.
    pub fn new(vars: &[(&str, Option<i32>)], order: usize) -> Arc<ScalarContext> {
        assert!(order >= 1, "truncation order must be positive");
        Arc::new(ScalarContext {
            names: vars.iter().map(|(n, _)| n.to_string()).collect(),
            caps: vars.iter().map(|(_, c)| *c).collect(),
            order,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn num_vars(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn cap(&self, i: usize) -> Option<i32> {
        self.caps[i]
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Index of `name`, panicking if absent.
    pub fn var(&self, name: &str) -> usize {
        self.index(name).unwrap_or_else(|| panic!("unknown variable `{name}`"))
    }

    fn with_cap_removed(&self, i: usize) -> ScalarContext {
        let mut c = self.clone();
        c.caps[i] = None;
        c
    }

    /// `Ok(true)` keep, `Ok(false)` drop, `Err` for a negative weight.
    fn admit(&self, exps: &[i32], h: u32) -> Result<bool> {
        if h as usize >= self.order {
            return Ok(false);
        }
        let mut keep = true;
        for (i, cap) in self.caps.iter().enumerate() {
            if let Some(cap) = cap {
                let w = exps[i] + h as i32;
                if w < 0 {
                    return Err(Error::CapViolation {
                        var: self.names[i].clone(),
                        detail: format!("exponent {} with h^{} has negative weight", exps[i], h),
                    });
                }
                if w > *cap {
                    keep = false;
                }
            }
        }
        Ok(keep)
    }

    /// Whether the full `h`-series coefficient at `exps` is free of truncation.
    pub fn is_exact_at(&self, exps: &[i32]) -> bool {
        self.caps.iter().zip(exps).all(|(cap, &e)| cap.is_none_or(|c| e + self.order as i32 - 1 <= c))
    }
}

type Key = (Vec<i32>, u32);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpandedScalar {
    ctx: Arc<ScalarContext>,
    terms: BTreeMap<Key, Rat>,
}

impl ExpandedScalar {
    pub fn zero(ctx: &Arc<ScalarContext>) -> ExpandedScalar {
        ExpandedScalar { ctx: ctx.clone(), terms: BTreeMap::new() }
    }

    pub fn one(ctx: &Arc<ScalarContext>) -> ExpandedScalar {
        ExpandedScalar::constant(ctx, Rat::one())
    }

    pub fn constant(ctx: &Arc<ScalarContext>, c: Rat) -> ExpandedScalar {
        let mut s = ExpandedScalar::zero(ctx);
        if !c.is_zero() {
            s.terms.insert((vec![0; ctx.num_vars()], 0), c);
        }
        s
    }

    /// `c * h^h * prod x_i^{exps_i}`, silently zero when truncated away.
    pub fn monomial(ctx: &Arc<ScalarContext>, exps: &[i32], h: u32, c: Rat) -> Result<ExpandedScalar> {
        assert_eq!(exps.len(), ctx.num_vars());
        let mut s = ExpandedScalar::zero(ctx);
        if !c.is_zero() && ctx.admit(exps, h)? {
            s.terms.insert((exps.to_vec(), h), c);
        }
        Ok(s)
    }

    pub fn variable(ctx: &Arc<ScalarContext>, i: usize) -> ExpandedScalar {
        let mut e = vec![0; ctx.num_vars()];
        e[i] = 1;
        ExpandedScalar::monomial(ctx, &e, 0, Rat::one()).expect("positive exponent")
    }

    pub fn h(ctx: &Arc<ScalarContext>) -> ExpandedScalar {
        ExpandedScalar::monomial(ctx, &vec![0; ctx.num_vars()], 1, Rat::one()).expect("h is admissible")
    }

    pub fn context(&self) -> &Arc<ScalarContext> {
        &self.ctx
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

    pub fn terms(&self) -> impl Iterator<Item = (&[i32], u32, &Rat)> {
        self.terms.iter().map(|((e, h), c)| (e.as_slice(), *h, c))
    }

    fn check(&self, other: &ExpandedScalar) -> Result<()> {
        if Arc::ptr_eq(&self.ctx, &other.ctx) || *self.ctx == *other.ctx {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    fn insert_add(terms: &mut BTreeMap<Key, Rat>, key: Key, c: Rat) {
        use std::collections::btree_map::Entry;
        match terms.entry(key) {
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn try_add(&self, other: &ExpandedScalar) -> Result<ExpandedScalar> {
        self.check(other)?;
        let mut terms = self.terms.clone();
        for (k, c) in &other.terms {
            Self::insert_add(&mut terms, k.clone(), c.clone());
        }
        Ok(ExpandedScalar { ctx: self.ctx.clone(), terms })
    }

    pub fn try_sub(&self, other: &ExpandedScalar) -> Result<ExpandedScalar> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &ExpandedScalar) -> Result<ExpandedScalar> {
        self.check(other)?;
        let mut terms = BTreeMap::new();
        let mut exps = vec![0; self.ctx.num_vars()];
        for ((ea, ha), ca) in &self.terms {
            for ((eb, hb), cb) in &other.terms {
                let h = ha + hb;
                if h as usize >= self.ctx.order {
                    continue;
                }
                for i in 0..exps.len() {
                    exps[i] = ea[i] + eb[i];
                }
                // both factors have nonnegative weights, so only the upper cap can bite
                if self.ctx.admit(&exps, h)? {
                    Self::insert_add(&mut terms, (exps.clone(), h), ca * cb);
                }
            }
        }
        Ok(ExpandedScalar { ctx: self.ctx.clone(), terms })
    }

    pub fn pow(&self, e: u32) -> ExpandedScalar {
        let mut acc = ExpandedScalar::one(&self.ctx);
        for _ in 0..e {
            acc = acc.try_mul(self).expect("same context");
        }
        acc
    }

    pub fn neg(&self) -> ExpandedScalar {
        ExpandedScalar { ctx: self.ctx.clone(), terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect() }
    }

    pub fn scale(&self, c: &Rat) -> ExpandedScalar {
        if c.is_zero() {
            return ExpandedScalar::zero(&self.ctx);
        }
        ExpandedScalar { ctx: self.ctx.clone(), terms: self.terms.iter().map(|(k, a)| (k.clone(), a * c)).collect() }
    }

    /// Single coefficient; errors if it may have been truncated.
    pub fn coeff(&self, exps: &[i32], h: u32) -> Result<Rat> {
        for (i, &e) in exps.iter().enumerate() {
            if let Some(cap) = self.ctx.caps[i] {
                if e + h as i32 > cap {
                    return Err(Error::OutsideCaps(format!(
                        "{}^{} at h^{} exceeds cap {}",
                        self.ctx.names[i], e, h, cap
                    )));
                }
            }
        }
        Ok(self.terms.get(&(exps.to_vec(), h)).cloned().unwrap_or_else(Rat::zero))
    }

    /// The `h`-series coefficient of `prod x_i^{exps_i}`.
    pub fn coeff_series(&self, exps: &[i32]) -> Result<HSeries> {
        if !self.ctx.is_exact_at(exps) {
            return Err(Error::OutsideCaps(format!("exponents {exps:?} with h-order {}", self.ctx.order)));
        }
        let mut s = HSeries::zero(self.ctx.order);
        for h in 0..self.ctx.order as u32 {
            if let Some(c) = self.terms.get(&(exps.to_vec(), h)) {
                s.set_coeff(h as usize, c.clone());
            }
        }
        Ok(s)
    }

    /// Terms at a fixed power of `h`, keyed by exponent vector.
    pub fn h_slice(&self, k: u32) -> BTreeMap<Vec<i32>, Rat> {
        self.terms.iter().filter(|((_, h), _)| *h == k).map(|((e, _), c)| (e.clone(), c.clone())).collect()
    }

    /// True when `self - other` has no retained term.
    pub fn equals(&self, other: &ExpandedScalar) -> Result<bool> {
        Ok(self.try_sub(other)?.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.iter().all(|((e, h), c)| *h == 0 && e.iter().all(|&x| x == 0) && c.is_one())
    }

    /// Re-expresses the terms in another context with the same variables,
    /// dropping what the new caps or order discard.
    pub fn recast(&self, ctx: &Arc<ScalarContext>) -> Result<ExpandedScalar> {
        if ctx.names != self.ctx.names {
            return Err(Error::ContextMismatch);
        }
        let mut terms = BTreeMap::new();
        for ((e, h), c) in &self.terms {
            if ctx.admit(e, *h)? {
                terms.insert((e.clone(), *h), c.clone());
            }
        }
        Ok(ExpandedScalar { ctx: ctx.clone(), terms })
    }
}

impl fmt::Display for ExpandedScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, ((e, h), c)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            if *h > 0 {
                write!(f, "*h^{h}")?;
            }
            for (i, &x) in e.iter().enumerate() {
                if x != 0 {
                    write!(f, "*{}^{}", self.ctx.names[i], x)?;
                }
            }
        }
        Ok(())
    }
}

/// `sum_i a_i x_i + b h`. The first variable term is the left variable: negative
/// powers of the form are expanded in negative powers of it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearForm {
    terms: Vec<(usize, Rat)>,
    h: Rat,
}

impl LinearForm {
    pub fn new(terms: Vec<(usize, Rat)>, h: Rat) -> LinearForm {
        let mut merged: Vec<(usize, Rat)> = Vec::new();
        for (v, c) in terms {
            match merged.iter_mut().find(|(w, _)| *w == v) {
                Some((_, a)) => *a += &c,
                None => merged.push((v, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        LinearForm { terms: merged, h }
    }

    pub fn zero() -> LinearForm {
        LinearForm { terms: Vec::new(), h: Rat::zero() }
    }

    pub fn var(i: usize) -> LinearForm {
        LinearForm::new(vec![(i, Rat::one())], Rat::zero())
    }

    /// `x_i - x_j`.
    pub fn diff(i: usize, j: usize) -> LinearForm {
        LinearForm::new(vec![(i, Rat::one()), (j, -Rat::one())], Rat::zero())
    }

    pub fn terms(&self) -> &[(usize, Rat)] {
        &self.terms
    }

    pub fn h_coeff(&self) -> &Rat {
        &self.h
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.h.is_zero()
    }

    /// Adds `c h`.
    pub fn shift_h(&self, c: &Rat) -> LinearForm {
        LinearForm { terms: self.terms.clone(), h: &self.h + c }
    }

    /// Sum keeping the term order of `self` first.
    pub fn plus(&self, other: &LinearForm) -> LinearForm {
        let mut t = self.terms.clone();
        t.extend(other.terms.iter().cloned());
        LinearForm::new(t, &self.h + &other.h)
    }

    pub fn minus(&self, other: &LinearForm) -> LinearForm {
        self.plus(&other.negate())
    }

    /// Negation; the left variable stays on the left.
    pub fn negate(&self) -> LinearForm {
        LinearForm { terms: self.terms.iter().map(|(v, c)| (*v, -c)).collect(), h: -&self.h }
    }

    pub fn to_scalar(&self, ctx: &Arc<ScalarContext>) -> ExpandedScalar {
        let mut s = ExpandedScalar::constant(ctx, Rat::zero());
        for (v, c) in &self.terms {
            s = s.try_add(&ExpandedScalar::variable(ctx, *v).scale(c)).expect("same context");
        }
        s.try_add(&ExpandedScalar::h(ctx).scale(&self.h)).expect("same context")
    }

    /// `self^e` for `e >= 0`.
    pub fn power(&self, ctx: &Arc<ScalarContext>, e: u32) -> ExpandedScalar {
        self.to_scalar(ctx).pow(e)
    }
}

/// `h^k * form^{-r}`, expanded in negative powers of the left variable.
fn expand_scaled(ctx: &Arc<ScalarContext>, form: &LinearForm, r: u32, k: u32) -> Result<ExpandedScalar> {
    let (lead, a) =
        form.terms.first().cloned().ok_or_else(|| Error::Expansion("form has no variable to expand in".into()))?;
    for (v, _) in &form.terms[1..] {
        if ctx.cap(*v).is_none() {
            return Err(Error::Expansion(format!("variable `{}` is uncapped but not on the left", ctx.name(*v))));
        }
    }
    let aux = Arc::new(ctx.with_cap_removed(lead));
    let rest = LinearForm { terms: form.terms[1..].to_vec(), h: form.h.clone() }.to_scalar(&aux);
    let mut out = ExpandedScalar::zero(ctx);
    let mut rest_pow = ExpandedScalar::one(&aux);
    let mut l: u32 = 0;
    while !rest_pow.is_zero() {
        let e = -(r as i32) - l as i32;
        let coeff = Rat::binomial(-(r as i64), l) * a.pow(e);
        for ((exps, h), c) in &rest_pow.terms {
            let mut exps = exps.clone();
            exps[lead] += e;
            let h = h + k;
            if ctx.admit(&exps, h)? {
                ExpandedScalar::insert_add(&mut out.terms, (exps, h), c * &coeff);
            }
        }
        rest_pow = rest_pow.try_mul(&rest)?;
        l += 1;
    }
    Ok(out)
}

/// `form^{-r}` for `r > 0`, as `sum_l C(-r,l) x^{-r-l} (rest)^l` with `x` the left
/// variable.
pub fn expand_neg_power(ctx: &Arc<ScalarContext>, form: &LinearForm, r: u32) -> Result<ExpandedScalar> {
    assert!(r > 0, "exponent must be negative");
    expand_scaled(ctx, form, r, 0)
}

impl ExpandedScalar {
    /// `(h / form)^k`. Unlike `expand_neg_power` this is admissible with a capped
    /// left variable, as in `h/u` or `h/(u+2h)`.
    pub fn h_over(ctx: &Arc<ScalarContext>, form: &LinearForm, k: u32) -> Result<ExpandedScalar> {
        if k == 0 {
            return Ok(ExpandedScalar::one(ctx));
        }
        expand_scaled(ctx, form, k, k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64) -> Rat {
        Rat::from_int(n)
    }

    #[test]
    fn left_variable_carries_negative_powers() {
        let ctx = ScalarContext::new(&[("z", None), ("u", Some(2))], 1);
        let s = expand_neg_power(&ctx, &LinearForm::new(vec![(0, q(1)), (1, q(1))], q(0)), 1).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.coeff(&[-1, 0], 0).unwrap(), q(1));
        assert_eq!(s.coeff(&[-2, 1], 0).unwrap(), q(-1));
        assert_eq!(s.coeff(&[-3, 2], 0).unwrap(), q(1));
        assert!(s.coeff(&[-4, 3], 0).is_err());
    }

    #[test]
    fn single_variable_power() {
        let ctx = ScalarContext::new(&[("z", None)], 3);
        let s = expand_neg_power(&ctx, &LinearForm::var(0), 4).unwrap();
        assert_eq!(s, ExpandedScalar::monomial(&ctx, &[-4], 0, q(1)).unwrap());
    }

    #[test]
    fn binomial_coefficient_of_square_inverse() {
        let ctx = ScalarContext::new(&[("u", None), ("v", Some(6))], 1);
        let s = expand_neg_power(&ctx, &LinearForm::new(vec![(0, q(1)), (1, q(1))], q(0)), 2).unwrap();
        assert_eq!(s.coeff(&[-5, 3], 0).unwrap(), q(-4));
        // numeric oracle: at u = 10, v = 1 the partial sums approach 1/121
        let mut total = Rat::zero();
        for l in 0..=6 {
            total += &(s.coeff(&[-2 - l, l], 0).unwrap() * Rat::from_int(10).pow(-2 - l));
        }
        let err = &total - &Rat::new(1, 121);
        let abs = if err.is_negative() { -err } else { err };
        assert!(abs < Rat::new(1, 10_000_000));
    }

    #[test]
    fn uncapped_trailing_variable_rejected() {
        let ctx = ScalarContext::new(&[("z1", None), ("z2", None)], 2);
        assert!(expand_neg_power(&ctx, &LinearForm::diff(0, 1), 1).is_err());
    }

    #[test]
    fn capped_left_variable_needs_h() {
        let ctx = ScalarContext::new(&[("u", Some(0))], 5);
        let f = LinearForm::new(vec![(0, q(1))], q(2));
        assert!(expand_neg_power(&ctx, &f, 1).is_err());
        let y = ExpandedScalar::h_over(&ctx, &f, 1).unwrap();
        // h/(u+2h) = x - 2x^2 + 4x^3 - 8x^4 with x = h/u
        for k in 1..5 {
            assert_eq!(y.coeff(&[-(k as i32)], k).unwrap(), q(-2).pow(k as i32 - 1));
        }
    }

    #[test]
    fn mismatched_contexts_rejected() {
        let a = ScalarContext::new(&[("z", None)], 2);
        let b = ScalarContext::new(&[("z", None)], 3);
        assert_eq!(ExpandedScalar::one(&a).try_mul(&ExpandedScalar::one(&b)), Err(Error::ContextMismatch));
    }

    proptest! {
        #[test]
        fn inverse_of_sum_times_sum_is_one_below_cap(a in 1i64..5, b in -5i64..5, cap in 1i32..6) {
            prop_assume!(b != 0);
            let ctx = ScalarContext::new(&[("x", None), ("y", Some(cap))], 1);
            let f = LinearForm::new(vec![(0, q(a)), (1, q(b))], q(0));
            let inv = expand_neg_power(&ctx, &f, 1).unwrap();
            let prod = inv.try_mul(&f.to_scalar(&ctx)).unwrap();
            // everything except the boundary term y^{cap+1} survives truncation
            prop_assert!(prod.is_one());
        }

        #[test]
        fn h_over_is_multiplicative(c in -3i64..4, k in 1u32..4) {
            let ctx = ScalarContext::new(&[("u", Some(0))], 7);
            let f = LinearForm::new(vec![(0, q(1))], q(c));
            let y1 = ExpandedScalar::h_over(&ctx, &f, 1).unwrap();
            let yk = ExpandedScalar::h_over(&ctx, &f, k).unwrap();
            prop_assert_eq!(y1.pow(k), yk);
        }
    }
}
