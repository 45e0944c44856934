//! Relations among quantum quasi-particles at `t != 0`: the exchange
//! identities, the Vandermonde systems for their coefficients, and the
//! resulting derivative relations modulo `h`.
//!
//! All quasi-particle products here act on the vacuum and their factors
//! `x^+(z + a h)` commute, so an identity between two products of such
//! factors amounts to equality of the multisets of shifts `a`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::solve;
use crate::principal::{shifted_product, WElement};
use crate::rat::Rat;

/// Shifts `z + j t h`, stored as the integers `j` with multiplicities.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftMultiset {
    pub base: String,
    counts: BTreeMap<i64, u32>,
}

impl ShiftMultiset {
    pub fn empty() -> ShiftMultiset {
        ShiftMultiset { base: "z".into(), counts: BTreeMap::new() }
    }

    /// The factors of `x^t_(m)(z + offset t h)`: offsets `offset, ..., offset + m - 1`.
    pub fn quasi_particle(m: u32, offset: i64) -> ShiftMultiset {
        let mut s = ShiftMultiset::empty();
        for j in 0..m as i64 {
            s.insert(offset + j);
        }
        s
    }

    pub fn insert(&mut self, j: i64) {
        *self.counts.entry(j).or_insert(0) += 1;
    }

    pub fn union(&self, other: &ShiftMultiset) -> ShiftMultiset {
        let mut out = self.clone();
        for (j, n) in &other.counts {
            *out.counts.entry(*j).or_insert(0) += n;
        }
        out
    }

    pub fn len(&self) -> usize {
        self.counts.values().map(|&n| n as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// The shifts listed with multiplicity, ascending.
    pub fn elements(&self) -> Vec<i64> {
        self.counts.iter().flat_map(|(j, n)| std::iter::repeat_n(*j, *n as usize)).collect()
    }

    /// The actual coefficients `j t` of `h`.
    pub fn shifts(&self, t: &Rat) -> Vec<Rat> {
        self.elements().into_iter().map(|j| t * &Rat::from_int(j)).collect()
    }
}

impl fmt::Display for ShiftMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.elements().iter().map(i64::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// The nodes `(0, 1, ..., p-1; q+1, ..., q+p)` in units of `t`.
pub fn nodes(p: u32, q: u32) -> Vec<i64> {
    let (p, q) = (p as i64, q as i64);
    (0..p).chain(q + 1..=q + p).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
/// Which half of the nodes shifts the charge-`p` factor.
pub enum Exchange {
    /// `x_(p)(z + c_k h) x_(q)(z + pth) = x_(k-1)(z + pth) x_(p+q-k+1)(z + c_k h)`.
    Lower,
    /// `x_(p)(z + c_{p+k} h) x_(q)(z + pth) = x_(p-k)(z + c_{p+k} h) x_(q+k)(z + pth)`.
    Upper,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExchangeReport {
    pub p: u32,
    pub q: u32,
    pub k: u32,
    pub which: Exchange,
    pub lhs: String,
    pub rhs: String,
    pub multisets_equal: bool,
    pub series_equal: bool,
    /// Set when one right-hand factor is the empty product `x_(0) = 1`.
    pub empty_factor: bool,
}

impl ExchangeReport {
    pub fn holds(&self) -> bool {
        self.multisets_equal && self.series_equal
    }
}

fn check_indices(p: u32, q: u32) -> Result<()> {
    if p == 0 || q < p {
        return Err(Error::IndexOutOfRange(format!("need q >= p >= 1, got p={p}, q={q}")));
    }
    Ok(())
}

pub fn exchange_identity_check(p: u32, q: u32, k: u32, which: Exchange, t: &Rat) -> Result<ExchangeReport> {
    check_indices(p, q)?;
    if k == 0 || k > p {
        return Err(Error::IndexOutOfRange(format!("need 1 <= k <= p = {p}, got {k}")));
    }
    let c = nodes(p, q);
    let pi = p as i64;
    let (lhs, a, b) = match which {
        Exchange::Lower => {
            let ck = c[k as usize - 1];
            let lhs = ShiftMultiset::quasi_particle(p, ck).union(&ShiftMultiset::quasi_particle(q, pi));
            (lhs, ShiftMultiset::quasi_particle(k - 1, pi), ShiftMultiset::quasi_particle(p + q - k + 1, ck))
        }
        Exchange::Upper => {
            let ck = c[(p + k) as usize - 1];
            let lhs = ShiftMultiset::quasi_particle(p, ck).union(&ShiftMultiset::quasi_particle(q, pi));
            (lhs, ShiftMultiset::quasi_particle(p - k, ck), ShiftMultiset::quasi_particle(q + k, pi))
        }
    };
    let rhs = a.union(&b);
    let (window, order) = (1u32, 2usize);
    let cap = window + p + q + order as u32 - 1;
    let series_equal =
        shifted_product(&lhs.shifts(t), window, cap, order) == shifted_product(&rhs.shifts(t), window, cap, order);
    Ok(ExchangeReport {
        p,
        q,
        k,
        which,
        lhs: lhs.to_string(),
        rhs: format!("{a} + {b}"),
        multisets_equal: lhs == rhs,
        series_equal,
        empty_factor: a.is_empty() || b.is_empty(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlphaSolution {
    pub p: u32,
    pub q: u32,
    pub l: u32,
    pub t: Rat,
    /// `c_1, ..., c_l`.
    pub nodes: Vec<Rat>,
    pub alpha: Vec<Rat>,
}

impl AlphaSolution {
    /// `sum_i c_i^k alpha_i - delta_{k,l-1} (l-1)!` for `k < l`.
    pub fn residual(&self) -> Vec<Rat> {
        residual(&self.nodes, &self.alpha)
    }
}

fn residual(nodes: &[Rat], alpha: &[Rat]) -> Vec<Rat> {
    let l = nodes.len();
    (0..l)
        .map(|k| {
            let lhs: Rat = nodes.iter().zip(alpha).map(|(c, a)| &c.pow(k as i32) * a).sum();
            let rhs = if k + 1 == l { Rat::factorial(l as u32 - 1) } else { Rat::zero() };
            &lhs - &rhs
        })
        .collect()
}

/// Solves `sum_i c_i^k alpha_i = delta_{k,l-1} (l-1)!`, `k = 0..l-1`, with
/// `0^0 = 1`.
pub fn solve_alpha(p: u32, q: u32, l: u32, t: &Rat) -> Result<AlphaSolution> {
    check_indices(p, q)?;
    if l == 0 || l > 2 * p {
        return Err(Error::IndexOutOfRange(format!("need 1 <= l <= 2p = {}, got {l}", 2 * p)));
    }
    if t.is_zero() && l >= 2 {
        return Err(Error::Singular(format!("nodes collide at t = 0 for l = {l}")));
    }
    let c: Vec<Rat> = nodes(p, q).into_iter().take(l as usize).map(|j| t * &Rat::from_int(j)).collect();
    let a: Vec<Vec<Rat>> = (0..l as i32).map(|k| c.iter().map(|ci| ci.pow(k)).collect()).collect();
    let mut b = vec![Rat::zero(); l as usize];
    b[l as usize - 1] = Rat::factorial(l - 1);
    let alpha = solve(a, b)?;
    Ok(AlphaSolution { p, q, l, t: t.clone(), nodes: c, alpha })
}

/// `z^0..z^window` coefficients of `sum_k alpha_k x_(p)(z + c_k h) x_(q)(z + pth) 1`.
fn combined_sum(sol: &AlphaSolution, window: u32, order: usize) -> Vec<WElement> {
    let (p, q) = (sol.p, sol.q);
    let cap = window + p + q + order as u32 - 1;
    let right = ShiftMultiset::quasi_particle(q, p as i64);
    let mut acc = vec![WElement::zero(cap, order); window as usize + 1];
    for (j, a) in nodes(p, q).into_iter().take(sol.l as usize).zip(&sol.alpha) {
        let s = ShiftMultiset::quasi_particle(p, j).union(&right);
        for (slot, w) in acc.iter_mut().zip(shifted_product(&s.shifts(&sol.t), window, cap, order)) {
            *slot = slot.try_add(&w.scale(a)).expect("same caps");
        }
    }
    acc
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
    /// Everything vanished below `h^N` but `N` is too small to reach the bound.
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValuationReport {
    pub p: u32,
    pub q: u32,
    pub l: u32,
    pub t: Rat,
    pub order: usize,
    pub window: u32,
    /// Smallest power of `h` seen on the window; `None` if all vanish mod `h^N`.
    pub valuation: Option<usize>,
    pub verdict: Verdict,
}

/// The `h`-valuation of the combined sum, which should be at least `l - 1`.
pub fn valuation_check(p: u32, q: u32, l: u32, t: &Rat, order: usize, window: u32) -> Result<ValuationReport> {
    let sol = solve_alpha(p, q, l, t)?;
    let sums = combined_sum(&sol, window, order);
    let valuation = sums.iter().filter_map(WElement::valuation).min();
    let bound = l as usize - 1;
    let verdict = match valuation {
        Some(v) if v >= bound => Verdict::Holds,
        Some(_) => Verdict::Fails,
        None if order >= bound => Verdict::Holds,
        None => Verdict::Inconclusive,
    };
    Ok(ValuationReport { p, q, l, t: t.clone(), order, window, valuation, verdict })
}

#[derive(Clone, Debug, Serialize)]
pub struct DerivativeReport {
    pub p: u32,
    pub q: u32,
    pub l: u32,
    pub t: Rat,
    pub window: u32,
    /// `h^{1-l} sum_k alpha_k (...)` equals `(d^{l-1} x_(p)) x_(q)` mod `h`.
    pub holds: bool,
    /// The same with the prefactor `(th)^{1-l}`.
    pub holds_with_t_power: bool,
    /// First window exponent where the `h^{1-l}` form differs.
    pub first_mismatch: Option<u32>,
}

/// `z^j` coefficients of `(d/dz)^{l-1}(x(z)^p) x(z)^q` from classical
/// generating series.
fn classical_derivative_product(p: u32, q: u32, l: u32, window: u32, cap: u32) -> Vec<WElement> {
    let d = l - 1;
    let a = shifted_product(&vec![Rat::zero(); p as usize], window + d, cap, 1);
    let b = shifted_product(&vec![Rat::zero(); q as usize], window, cap, 1);
    (0..=window)
        .map(|j| {
            let mut acc = WElement::zero(cap, 1);
            for i in 0..=j {
                // d^d z^{i+d} = (i+d)!/i! z^i
                let f = &Rat::factorial(i + d) * &Rat::factorial(i).recip();
                let term = a[(i + d) as usize].try_mul(&b[(j - i) as usize]).expect("same caps");
                acc = acc.try_add(&term.scale(&f)).expect("same caps");
            }
            acc
        })
        .collect()
}

/// The derivative relation modulo `h` on `z^0..z^window`.
pub fn derivative_relation_check(p: u32, q: u32, l: u32, t: &Rat, window: u32) -> Result<DerivativeReport> {
    let sol = solve_alpha(p, q, l, t)?;
    let order = l as usize;
    let sums = combined_sum(&sol, window, order);
    let cap = window + p + q + order as u32 - 1;
    let expected = classical_derivative_product(p, q, l, window, cap);
    let t_power = t.pow(1 - l as i32);
    let mut first_mismatch = None;
    let mut holds_with_t_power = true;
    for (j, (s, e)) in sums.iter().zip(&expected).enumerate() {
        if s.valuation().is_some_and(|v| v + 1 < l as usize) {
            first_mismatch.get_or_insert(j as u32);
            holds_with_t_power = false;
            continue;
        }
        let mut lead = WElement::zero(cap, 1);
        for (m, c) in s.h_slice(l as usize - 1) {
            lead.add_scalar_term(m, &c, 0);
        }
        if lead != *e {
            first_mismatch.get_or_insert(j as u32);
        }
        holds_with_t_power &= lead.scale(&t_power) == *e;
    }
    Ok(DerivativeReport {
        p,
        q,
        l,
        t: t.clone(),
        window,
        holds: first_mismatch.is_none(),
        holds_with_t_power,
        first_mismatch,
    })
}

/// One line of a relations run.
#[derive(Clone, Debug, Serialize)]
pub struct RelationCheck {
    pub name: String,
    pub params: String,
    pub passed: bool,
    pub detail: String,
}

/// Every relation check for `1 <= p <= q <= pmax`: exchange identities, the
/// Vandermonde residuals, valuations and derivative relations at shift `t`.
pub fn relations_suite(pmax: u32, t: &Rat, window: u32) -> Result<Vec<RelationCheck>> {
    let mut out = Vec::new();
    for p in 1..=pmax {
        for q in p..=pmax {
            for k in 1..=p {
                for which in [Exchange::Lower, Exchange::Upper] {
                    let r = exchange_identity_check(p, q, k, which, t)?;
                    out.push(RelationCheck {
                        name: format!("exchange-{which:?}").to_lowercase(),
                        params: format!("p={p} q={q} k={k}"),
                        passed: r.holds(),
                        detail: format!("{} = {}", r.lhs, r.rhs),
                    });
                }
            }
            if t.is_zero() {
                continue;
            }
            for l in 1..=2 * p {
                let sol = solve_alpha(p, q, l, t)?;
                let params = format!("p={p} q={q} l={l} t={t}");
                out.push(RelationCheck {
                    name: "vandermonde".into(),
                    params: params.clone(),
                    passed: sol.residual().iter().all(Zero::is_zero),
                    detail: format!("alpha={:?}", sol.alpha.iter().map(Rat::to_string).collect::<Vec<_>>()),
                });
                let v = valuation_check(p, q, l, t, l as usize, window)?;
                out.push(RelationCheck {
                    name: "valuation".into(),
                    params: params.clone(),
                    passed: v.verdict == Verdict::Holds,
                    detail: format!("valuation={:?} bound={}", v.valuation, l - 1),
                });
                let d = derivative_relation_check(p, q, l, t, window)?;
                out.push(RelationCheck {
                    name: "derivative".into(),
                    params,
                    passed: d.holds,
                    detail: match d.first_mismatch {
                        Some(j) => format!("first mismatch at z^{j}"),
                        None => "equal mod h".into(),
                    },
                });
            }
        }
    }
    Ok(out)
}

/// The exact `alpha` for node list `c`: `(l-1)! / prod_{j != i} (c_i - c_j)`.
pub fn alpha_closed_form(c: &[Rat]) -> Vec<Rat> {
    let l = c.len();
    let f = Rat::factorial(l as u32 - 1);
    (0..l)
        .map(|i| {
            let den: Rat = (0..l).filter(|&j| j != i).map(|j| &c[i] - &c[j]).product();
            &f * &den.recip()
        })
        .collect()
}
