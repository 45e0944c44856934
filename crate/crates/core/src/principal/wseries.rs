//! Expansions of products `x^+(L_1) ... x^+(L_n) 1` where
//! `x^+(L) = sum_{s>=1} x(-s) L^{s-1}` and each `L` is a linear form in some
//! variables and `h`. Only nonnegative powers of the variables occur, so the
//! expansion is truncated at per-variable maximal exponents without loss below
//! them.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::rat::Rat;
use crate::series::LinearForm;

use super::pbw::{PbwMonomial, WElement};

/// Coefficient map from variable exponents to vectors of `W`.
pub type WSeries = BTreeMap<Vec<i32>, WElement>;

type Poly = BTreeMap<(Vec<i32>, u32), Rat>;

fn poly_mul(a: &Poly, b: &Poly, max_exps: &[i32], order: usize) -> Poly {
    let mut out = Poly::new();
    for ((ea, ha), ca) in a {
        for ((eb, hb), cb) in b {
            let h = ha + hb;
            if h as usize >= order {
                continue;
            }
            let e: Vec<i32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            if e.iter().zip(max_exps).any(|(x, m)| x > m) {
                continue;
            }
            let entry = out.entry((e, h)).or_insert_with(Rat::zero);
            *entry += &(ca * cb);
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn form_poly(form: &LinearForm, nvars: usize) -> Poly {
    let mut p = Poly::new();
    for (v, c) in form.terms() {
        let mut e = vec![0; nvars];
        e[*v] = 1;
        p.insert((e, 0), c.clone());
    }
    if !form.h_coeff().is_zero() {
        p.insert((vec![0; nvars], 1), form.h_coeff().clone());
    }
    p
}

/// `x^+(L) = sum_s x(-s) L^{s-1}` with `s` up to the degree cap.
pub fn xplus(form: &LinearForm, nvars: usize, max_exps: &[i32], degree_cap: u32, order: usize) -> WSeries {
    let base = form_poly(form, nvars);
    let mut power = Poly::new();
    power.insert((vec![0; nvars], 0), Rat::one());
    let mut out = WSeries::new();
    for s in 1..=degree_cap {
        if power.is_empty() {
            break;
        }
        let mode = PbwMonomial::new(vec![s]);
        for ((e, k), c) in &power {
            out.entry(e.clone()).or_insert_with(|| WElement::zero(degree_cap, order)).add_scalar_term(
                mode.clone(),
                c,
                *k as usize,
            );
        }
        power = poly_mul(&power, &base, max_exps, order);
    }
    out.retain(|_, w| !w.is_zero());
    out
}

/// Product of two series, truncated at `max_exps`.
pub fn wseries_mul(a: &WSeries, b: &WSeries, max_exps: &[i32]) -> WSeries {
    let mut out = WSeries::new();
    for (ea, wa) in a {
        for (eb, wb) in b {
            let e: Vec<i32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            if e.iter().zip(max_exps).any(|(x, m)| x > m) {
                continue;
            }
            let p = wa.try_mul(wb).expect("matching caps");
            if p.is_zero() {
                continue;
            }
            match out.get_mut(&e) {
                Some(w) => *w = w.try_add(&p).expect("matching caps"),
                None => {
                    out.insert(e, p);
                }
            }
        }
    }
    out.retain(|_, w| !w.is_zero());
    out
}

/// `x^+(L_1) ... x^+(L_n) 1`; the empty product is the vacuum.
pub fn xplus_product(args: &[LinearForm], nvars: usize, max_exps: &[i32], degree_cap: u32, order: usize) -> WSeries {
    let mut acc = WSeries::new();
    acc.insert(vec![0; nvars], WElement::vacuum(degree_cap, order));
    for a in args {
        acc = wseries_mul(&acc, &xplus(a, nvars, max_exps, degree_cap, order), max_exps);
    }
    acc
}

/// Coefficients of `u^0 .. u^max` in `prod_i x^+(u + a_i h) 1`.
pub fn shifted_product(shifts: &[Rat], max_power: u32, degree_cap: u32, order: usize) -> Vec<WElement> {
    let args: Vec<LinearForm> = shifts.iter().map(|a| LinearForm::var(0).shift_h(a)).collect();
    let s = xplus_product(&args, 1, &[max_power as i32], degree_cap, order);
    (0..=max_power as i32)
        .map(|j| s.get(&vec![j]).cloned().unwrap_or_else(|| WElement::zero(degree_cap, order)))
        .collect()
}
