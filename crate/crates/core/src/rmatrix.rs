//! The Yang R-matrix `R(u) = 1 - hP/u` on `C^2 (x) C^2`, its normalization
//! `g(u)R(u)`, and the twisted products used by crossing symmetry.
//!
//! Entry `(2i+k, 2j+l)` (zero-based) holds the coefficient of `e_ij (x) e_kl`.

use std::sync::Arc;

use crate::error::Result;
use crate::series::{g_at, ExpandedScalar, LinearForm, ScalarContext};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixOperator {
    ctx: Arc<ScalarContext>,
    entries: Vec<ExpandedScalar>,
}

fn idx(a: usize, b: usize) -> usize {
    a * 4 + b
}

impl MatrixOperator {
    pub fn zero(ctx: &Arc<ScalarContext>) -> MatrixOperator {
        MatrixOperator { ctx: ctx.clone(), entries: vec![ExpandedScalar::zero(ctx); 16] }
    }

    pub fn identity(ctx: &Arc<ScalarContext>) -> MatrixOperator {
        let mut m = MatrixOperator::zero(ctx);
        for a in 0..4 {
            m.entries[idx(a, a)] = ExpandedScalar::one(ctx);
        }
        m
    }

    /// The flip `P = sum_ij e_ij (x) e_ji`.
    pub fn permutation(ctx: &Arc<ScalarContext>) -> MatrixOperator {
        let mut m = MatrixOperator::zero(ctx);
        for i in 0..2 {
            for j in 0..2 {
                m.entries[idx(2 * i + j, 2 * j + i)] = ExpandedScalar::one(ctx);
            }
        }
        m
    }

    pub fn context(&self) -> &Arc<ScalarContext> {
        &self.ctx
    }

    /// Raw matrix entry, zero-based row and column in `0..4`.
    pub fn get(&self, row: usize, col: usize) -> &ExpandedScalar {
        &self.entries[idx(row, col)]
    }

    /// Coefficient of `e_ij (x) e_kl`, indices one-based as in `e_12`.
    pub fn tensor_coeff(&self, i: usize, j: usize, k: usize, l: usize) -> &ExpandedScalar {
        assert!((1..=2).contains(&i) && (1..=2).contains(&j) && (1..=2).contains(&k) && (1..=2).contains(&l));
        self.get(2 * (i - 1) + (k - 1), 2 * (j - 1) + (l - 1))
    }

    pub fn scale(&self, s: &ExpandedScalar) -> Result<MatrixOperator> {
        let entries = self.entries.iter().map(|e| e.try_mul(s)).collect::<Result<_>>()?;
        Ok(MatrixOperator { ctx: self.ctx.clone(), entries })
    }

    pub fn try_add(&self, other: &MatrixOperator) -> Result<MatrixOperator> {
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a.try_add(b)).collect::<Result<_>>()?;
        Ok(MatrixOperator { ctx: self.ctx.clone(), entries })
    }

    pub fn try_sub(&self, other: &MatrixOperator) -> Result<MatrixOperator> {
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a.try_sub(b)).collect::<Result<_>>()?;
        Ok(MatrixOperator { ctx: self.ctx.clone(), entries })
    }

    /// Ordinary operator product `self * other`.
    pub fn try_mul(&self, other: &MatrixOperator) -> Result<MatrixOperator> {
        let mut out = MatrixOperator::zero(&self.ctx);
        for a in 0..4 {
            for c in 0..4 {
                let mut acc = ExpandedScalar::zero(&self.ctx);
                for b in 0..4 {
                    let (x, y) = (&self.entries[idx(a, b)], &other.entries[idx(b, c)]);
                    if !x.is_zero() && !y.is_zero() {
                        acc = acc.try_add(&x.try_mul(y)?)?;
                    }
                }
                out.entries[idx(a, c)] = acc;
            }
        }
        Ok(out)
    }

    /// Nonzero pure-tensor components `(i, j, k, l, coeff)` of `e_ij (x) e_kl`.
    fn components(&self) -> Vec<(usize, usize, usize, usize, &ExpandedScalar)> {
        let mut v = Vec::new();
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        let c = &self.entries[idx(2 * i + k, 2 * j + l)];
                        if !c.is_zero() {
                            v.push((i, j, k, l, c));
                        }
                    }
                }
            }
        }
        v
    }

    /// `sum (b' a') (x) (a'' b'')` for `self = sum a' (x) a''`, `other = sum b' (x) b''`.
    pub fn rl_product(&self, other: &MatrixOperator) -> Result<MatrixOperator> {
        let mut out = MatrixOperator::zero(&self.ctx);
        for (i, j, k, l, a) in self.components() {
            for (p, q, r, s, b) in other.components() {
                // e_pq e_ij = e_pj if q = i; e_kl e_rs = e_ks if l = r
                if q == i && l == r {
                    let e = &mut out.entries[idx(2 * p + k, 2 * j + s)];
                    *e = e.try_add(&a.try_mul(b)?)?;
                }
            }
        }
        Ok(out)
    }

    /// `sum (a' b') (x) (b'' a'')`.
    pub fn lr_product(&self, other: &MatrixOperator) -> Result<MatrixOperator> {
        let mut out = MatrixOperator::zero(&self.ctx);
        for (i, j, k, l, a) in self.components() {
            for (p, q, r, s, b) in other.components() {
                // e_ij e_pq = e_iq if j = p; e_rs e_kl = e_rl if s = k
                if j == p && s == k {
                    let e = &mut out.entries[idx(2 * i + r, 2 * q + l)];
                    *e = e.try_add(&a.try_mul(b)?)?;
                }
            }
        }
        Ok(out)
    }

    pub fn is_identity(&self) -> bool {
        (0..4).all(|a| {
            (0..4).all(|b| {
                let e = &self.entries[idx(a, b)];
                if a == b {
                    e.is_one()
                } else {
                    e.is_zero()
                }
            })
        })
    }

    /// Entries at a fixed power of `h`, as a matrix of exponent maps.
    pub fn h_slice(&self, k: u32) -> Vec<std::collections::BTreeMap<Vec<i32>, crate::Rat>> {
        self.entries.iter().map(|e| e.h_slice(k)).collect()
    }
}

/// `R(L) = 1 - h P L^{-1}` at the argument `L`.
pub fn yang_r(ctx: &Arc<ScalarContext>, arg: &LinearForm) -> Result<MatrixOperator> {
    let y = ExpandedScalar::h_over(ctx, arg, 1)?;
    MatrixOperator::identity(ctx).try_sub(&MatrixOperator::permutation(ctx).scale(&y)?)
}

/// The normalized `g(L) R(L)`.
pub fn rbar(ctx: &Arc<ScalarContext>, arg: &LinearForm) -> Result<MatrixOperator> {
    yang_r(ctx, arg)?.scale(&g_at(ctx, arg)?)
}

/// Context with a single spectral parameter `u`; `h/u` has weight zero.
pub fn spectral_context(order: usize) -> Arc<ScalarContext> {
    ScalarContext::new(&[("u", Some(0))], order)
}

/// `Rbar(u) Rbar(-u)`, the identity when unitarity holds.
pub fn unitarity_product(order: usize) -> Result<MatrixOperator> {
    let ctx = spectral_context(order);
    let u = LinearForm::var(0);
    rbar(&ctx, &u)?.try_mul(&rbar(&ctx, &u.negate())?)
}

/// `(Rbar(-u) .RL Rbar(u+2h), Rbar(-u) .LR Rbar(u+2h))`.
pub fn crossing_products(order: usize) -> Result<(MatrixOperator, MatrixOperator)> {
    let ctx = spectral_context(order);
    let u = LinearForm::var(0);
    let a = rbar(&ctx, &u.negate())?;
    let b = rbar(&ctx, &u.shift_h(&crate::Rat::from_int(2)))?;
    Ok((a.rl_product(&b)?, a.lr_product(&b)?))
}
