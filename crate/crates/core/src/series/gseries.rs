//! The normalizing series `g(u) = sum_n g_n (h/u)^n`, fixed by `g_0 = 1` and
//! `g(u+2h) = g(u)(1 - h^2 u^{-2})`.

use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::Result;
use crate::rat::Rat;

use super::expanded::{ExpandedScalar, LinearForm, ScalarContext};
use super::hseries::HSeries;

/// Coefficients `g_0..g_{N-1}` as a series in `x = h/u`.
///
/// Since `h/(u+2h) = x/(1+2x)`, the `x^n` coefficient of the functional equation
/// reads `sum_{j<=n} g_j C(-j, n-j) 2^{n-j} = g_n - g_{n-2}`. The `g_n` terms
/// cancel and the `j = n-1` term carries `-2(n-1) g_{n-1}`, which determines
/// `g_{n-1}` from lower coefficients.
pub fn g_series(order: usize) -> HSeries {
    let mut g = vec![Rat::zero(); order + 1];
    g[0] = Rat::one();
    for n in 2..=order {
        let mut s = g[n - 2].clone();
        for (j, gj) in g.iter().enumerate().take(n - 1) {
            if gj.is_zero() {
                continue;
            }
            let k = (n - j) as u32;
            s += &(gj * &Rat::binomial(-(j as i64), k) * Rat::from_int(2).pow(k as i32));
        }
        g[n - 1] = s / Rat::from_int(2 * (n as i64 - 1));
    }
    g.truncate(order);
    HSeries::from_coeffs(g, order)
}

/// `g(L)` for a linear form `L`, i.e. `G(h/L)` with `h/L` expanded in negative
/// powers of the left variable of `L`.
pub fn g_at(ctx: &Arc<ScalarContext>, form: &LinearForm) -> Result<ExpandedScalar> {
    let g = g_series(ctx.order());
    let y = ExpandedScalar::h_over(ctx, form, 1)?;
    let mut acc = ExpandedScalar::zero(ctx);
    for c in g.coeffs().iter().rev() {
        acc = acc.try_mul(&y)?.try_add(&ExpandedScalar::constant(ctx, c.clone()))?;
    }
    Ok(acc)
}

/// `g(u+2h) - g(u)(1 - x^2)` in `x = h/u`; zero for a correct `g`.
pub fn g_shift_residual(order: usize) -> HSeries {
    let g = g_series(order);
    let x = HSeries::monomial(Rat::one(), 1, order);
    let shifted = &x * &(&HSeries::one(order) + &x.scale(&Rat::from_int(2))).inverse().expect("unit");
    let lhs = g.compose(&shifted).expect("zero constant term");
    let rhs = &g * &(&HSeries::one(order) - &(&x * &x));
    &lhs - &rhs
}

/// `g(u) g(-u) (1 - x^2) - 1` in `x = h/u`.
pub fn g_unitarity_residual(order: usize) -> HSeries {
    let g = g_series(order);
    let x = HSeries::monomial(Rat::one(), 1, order);
    let g_neg = g.compose(&-&x).expect("zero constant term");
    &(&(&g * &g_neg) * &(&HSeries::one(order) - &(&x * &x))) - &HSeries::one(order)
}

/// `g(z) g(-z+2h) - 1`, with both factors expanded in one context in `z`.
pub fn g_reflection_residual(order: usize) -> Result<ExpandedScalar> {
    let ctx = ScalarContext::new(&[("z", Some(0))], order);
    let z = LinearForm::var(0);
    let a = g_at(&ctx, &z)?;
    let b = g_at(&ctx, &z.negate().shift_h(&Rat::from_int(2)))?;
    a.try_mul(&b)?.try_sub(&ExpandedScalar::one(&ctx))
}
