//! The vertex operator map and braiding on the principal subspace.
//!
//! On products of generating series both act by scalar prefactors:
//!
//! `Y(x^+_[n](u)1, z) x^+_[m](v)1 = prod_{i,j} F(z+u_i-v_j) x^+(z+u_1)...x^+(z+u_n) x^+(v_1)...x^+(v_m) 1`
//!
//! with `F(L) = p(-L) g(-L) g(L+(c+2)h)` and `p(L) = 1 - h/L`, while the braiding
//! multiplies `x^+_[n](u)1 (x) x^+_[m](v)1` by
//! `prod_{i,j} p(L)^2 g(L)^2 g(-L-hc) g(-L+(c+2)h)`. Every rational function of
//! `L = z + u_i - v_j` is expanded in negative powers of `z`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::principal::{xplus_product, WElement};
use crate::rat::Rat;
use crate::series::{g_at, ExpandedScalar, LinearForm, ScalarContext};

/// `1 - h/L`.
pub fn p_factor(ctx: &Arc<ScalarContext>, arg: &LinearForm) -> Result<ExpandedScalar> {
    ExpandedScalar::one(ctx).try_sub(&ExpandedScalar::h_over(ctx, arg, 1)?)
}

/// `p(-L) g(-L) g(L+(c+2)h)`, one pair factor of the vertex operator map.
pub fn y_pair_factor(ctx: &Arc<ScalarContext>, arg: &LinearForm, c: &Rat) -> Result<ExpandedScalar> {
    let neg = arg.negate();
    let shifted = arg.shift_h(&(c + &Rat::from_int(2)));
    p_factor(ctx, &neg)?.try_mul(&g_at(ctx, &neg)?)?.try_mul(&g_at(ctx, &shifted)?)
}

/// `p(L)^2 g(L)^2 g(-L-hc) g(-L+(c+2)h)`, one pair factor of the braiding.
pub fn s_pair_factor(ctx: &Arc<ScalarContext>, arg: &LinearForm, c: &Rat) -> Result<ExpandedScalar> {
    let p = p_factor(ctx, arg)?;
    let g = g_at(ctx, arg)?;
    let neg = arg.negate();
    p.try_mul(&p)?
        .try_mul(&g)?
        .try_mul(&g)?
        .try_mul(&g_at(ctx, &neg.shift_h(&-c))?)?
        .try_mul(&g_at(ctx, &neg.shift_h(&(c + &Rat::from_int(2))))?)
}

/// `g(L) g(-L-hc) (1 - h/L)`, the scalar in front of `Y(x(-1)1, z_1) Y(x(-1)1, z_2)`
/// in the S-locality relation, with `L = z_1 - z_2`.
pub fn locality_factor(ctx: &Arc<ScalarContext>, arg: &LinearForm, c: &Rat) -> Result<ExpandedScalar> {
    g_at(ctx, arg)?.try_mul(&g_at(ctx, &arg.negate().shift_h(&-c))?)?.try_mul(&p_factor(ctx, arg)?)
}

/// Variables `z, u_1..u_n, v_1..v_m` with `z` uncapped.
pub fn pair_context(n: usize, m: usize, u_cap: i32, v_cap: i32, order: usize) -> Arc<ScalarContext> {
    let names: Vec<(String, Option<i32>)> = std::iter::once(("z".to_string(), None))
        .chain((1..=n).map(|i| (format!("u{i}"), Some(u_cap))))
        .chain((1..=m).map(|j| (format!("v{j}"), Some(v_cap))))
        .collect();
    let refs: Vec<(&str, Option<i32>)> = names.iter().map(|(s, c)| (s.as_str(), *c)).collect();
    ScalarContext::new(&refs, order)
}

fn pair_product(
    n: usize,
    m: usize,
    ctx: &Arc<ScalarContext>,
    factor: impl Fn(&LinearForm) -> Result<ExpandedScalar>,
) -> Result<ExpandedScalar> {
    let mut acc = ExpandedScalar::one(ctx);
    for i in 0..n {
        for j in 0..m {
            let l = LinearForm::var(0).plus(&LinearForm::var(1 + i)).minus(&LinearForm::var(1 + n + j));
            acc = acc.try_mul(&factor(&l)?)?;
        }
    }
    Ok(acc)
}

/// `p_nm(-u|-v|-z) g_nm(-u|-v|-z) g_nm(u+h(c+2)|v|z)` in `pair_context(n, m, ..)`.
pub fn y_prefactor(n: usize, m: usize, c: &Rat, u_cap: i32, v_cap: i32, order: usize) -> Result<ExpandedScalar> {
    let ctx = pair_context(n, m, u_cap, v_cap, order);
    pair_product(n, m, &ctx, |l| y_pair_factor(&ctx, l, c))
}

/// `p_nm(u|v|z)^2 g_nm(u|v|z)^2 g_nm(-u|-v|-z-hc) g_nm(-u|-v|-z+(c+2)h)`.
pub fn s_prefactor(n: usize, m: usize, c: &Rat, u_cap: i32, v_cap: i32, order: usize) -> Result<ExpandedScalar> {
    let ctx = pair_context(n, m, u_cap, v_cap, order);
    pair_product(n, m, &ctx, |l| s_pair_factor(&ctx, l, c))
}

/// `prefactor * x^+(args_1) ... x^+(args_k) 1`.
#[derive(Clone, Debug)]
pub struct VertexResult {
    pub prefactor: ExpandedScalar,
    pub args: Vec<LinearForm>,
}

impl VertexResult {
    /// `x^+(args_1)...x^+(args_k) 1` with unit prefactor. A zero form stands for
    /// the specialization `u = 0`, e.g. `[0]` is `x(-1)1`.
    pub fn product(ctx: &Arc<ScalarContext>, args: Vec<LinearForm>) -> VertexResult {
        VertexResult { prefactor: ExpandedScalar::one(ctx), args }
    }

    pub fn vacuum(ctx: &Arc<ScalarContext>) -> VertexResult {
        VertexResult::product(ctx, Vec::new())
    }

    pub fn context(&self) -> &Arc<ScalarContext> {
        self.prefactor.context()
    }

    pub fn scale(&self, s: &ExpandedScalar) -> Result<VertexResult> {
        Ok(VertexResult { prefactor: self.prefactor.try_mul(s)?, args: self.args.clone() })
    }

    /// Coefficients at the given exponent vectors, as vectors of `W` truncated at
    /// `degree_cap`.
    pub fn coefficients(&self, targets: &[Vec<i32>], degree_cap: u32) -> Result<Vec<WElement>> {
        let ctx = self.context();
        let nv = ctx.num_vars();
        let order = ctx.order();
        for t in targets {
            if !ctx.is_exact_at(t) {
                return Err(Error::OutsideCaps(format!("coefficient {t:?} at h-order {order}")));
            }
        }
        let mut max_exps = vec![0i32; nv];
        let mut min_pref = vec![0i32; nv];
        for (e, _, _) in self.prefactor.terms() {
            for v in 0..nv {
                min_pref[v] = min_pref[v].min(e[v]);
            }
        }
        for t in targets {
            for v in 0..nv {
                max_exps[v] = max_exps[v].max(t[v] - min_pref[v]);
            }
        }
        for m in max_exps.iter_mut() {
            *m = (*m).clamp(0, degree_cap as i32);
        }
        let prod = xplus_product(&self.args, nv, &max_exps, degree_cap, order);
        let mut out = Vec::with_capacity(targets.len());
        for t in targets {
            let mut acc = WElement::zero(degree_cap, order);
            for (e, k, c) in self.prefactor.terms() {
                let f: Vec<i32> = t.iter().zip(e).map(|(a, b)| a - b).collect();
                if let Some(w) = prod.get(&f) {
                    acc = acc.try_add(&w.scale(c).shift_h(k as usize))?;
                }
            }
            out.push(acc);
        }
        Ok(out)
    }

    pub fn coefficient(&self, target: &[i32], degree_cap: u32) -> Result<WElement> {
        Ok(self.coefficients(&[target.to_vec()], degree_cap)?.pop().expect("one target"))
    }
}

/// `Y(x^+(a_1)...x^+(a_n)1, z) b`, where `b` is itself a prefactor times a
/// product of generating series; `z` must not occur in `a` or `b`.
pub fn y_apply(a_args: &[LinearForm], z: usize, b: &VertexResult, c: &Rat) -> Result<VertexResult> {
    let ctx = b.context().clone();
    let zf = LinearForm::var(z);
    let mut prefactor = b.prefactor.clone();
    for a in a_args {
        for bj in &b.args {
            let l = zf.plus(a).minus(bj);
            if l.terms().first().map(|t| t.0) != Some(z) {
                return Err(Error::Expansion("z cancels in a pair argument".into()));
            }
            prefactor = prefactor.try_mul(&y_pair_factor(&ctx, &l, c)?)?;
        }
    }
    let mut args: Vec<LinearForm> = a_args.iter().map(|a| zf.plus(a)).collect();
    args.extend(b.args.iter().cloned());
    Ok(VertexResult { prefactor, args })
}

/// Coefficients of `z^{-1}, ..., z^{-max_pole}` in `Y(x(-1)1, z) x(-1)1`.
pub fn pole_coefficients(c: &Rat, order: usize, max_pole: u32) -> Result<Vec<WElement>> {
    let ctx = ScalarContext::new(&[("z", None)], order);
    let b = VertexResult::product(&ctx, vec![LinearForm::zero()]);
    let y = y_apply(&[LinearForm::zero()], 0, &b, c)?;
    let targets: Vec<Vec<i32>> = (1..=max_pole as i32).map(|j| vec![-j]).collect();
    y.coefficients(&targets, order as u32 + 1)
}

/// Parameters of the S-locality comparison for `Y(x(-1)1, z)`.
#[derive(Clone, Debug, Serialize)]
pub struct LocalityParams {
    pub c: Rat,
    pub order: usize,
    /// Cap on the positive powers of the variable expanded on the right.
    pub cap: i32,
    /// Coefficients `z_1^a z_2^b` are compared for `a, b` in `[-depth, cap - order + 1]`.
    pub depth: i32,
    pub degree_cap: u32,
}

impl LocalityParams {
    pub fn new(c: Rat, order: usize) -> LocalityParams {
        let cap = order as i32 + 3;
        LocalityParams { c, order, cap, depth: order as i32 + 2, degree_cap: order as u32 + 6 }
    }

    fn window(&self) -> Vec<Vec<i32>> {
        let hi = self.cap - self.order as i32 + 1;
        let mut w = Vec::new();
        for a in -self.depth..=hi {
            for b in -self.depth..=hi {
                w.push(vec![a, b]);
            }
        }
        w
    }
}

/// A coefficient where the two sides differ.
#[derive(Clone, Debug, Serialize)]
pub struct Mismatch {
    pub vector: String,
    pub exponents: Vec<i32>,
    pub lhs: String,
    pub rhs: String,
}

fn locality_side(
    p: &LocalityParams,
    first: usize,
    second: usize,
    b_args: &[LinearForm],
    n_loc: u32,
    scalar: impl Fn(&Arc<ScalarContext>) -> Result<ExpandedScalar>,
) -> Result<Vec<WElement>> {
    // `first` acts last and is expanded on the left (uncapped)
    let mut vars = [("z1", Some(p.cap)), ("z2", Some(p.cap))];
    vars[first].1 = None;
    let ctx = ScalarContext::new(&vars, p.order);
    let b = VertexResult::product(&ctx, b_args.to_vec());
    let inner = y_apply(&[LinearForm::zero()], second, &b, &p.c)?;
    let outer = y_apply(&[LinearForm::zero()], first, &inner, &p.c)?;
    let poly = LinearForm::diff(0, 1).power(&ctx, n_loc);
    outer.scale(&scalar(&ctx)?.try_mul(&poly)?)?.coefficients(&p.window(), p.degree_cap)
}

/// Compares both sides of the S-locality relation for `Y(x(-1)1, z)` on the
/// vacuum and on `x(-1)1`, after multiplying by `(z_1-z_2)^{n_loc}`. Without
/// `braiding` the scalar factors are omitted, which turns the relation into
/// plain locality.
pub fn compare_s_locality(p: &LocalityParams, n_loc: u32, braiding: bool) -> Result<Option<Mismatch>> {
    let vectors: [(&str, Vec<LinearForm>); 2] = [("1", vec![]), ("x(-1)1", vec![LinearForm::zero()])];
    for (name, args) in vectors.iter() {
        let lhs = locality_side(p, 0, 1, args, n_loc, |ctx| {
            if braiding {
                locality_factor(ctx, &LinearForm::diff(0, 1), &p.c)
            } else {
                Ok(ExpandedScalar::one(ctx))
            }
        })?;
        let rhs = locality_side(p, 1, 0, args, n_loc, |ctx| {
            if braiding {
                locality_factor(ctx, &LinearForm::diff(1, 0), &p.c)
            } else {
                Ok(ExpandedScalar::one(ctx))
            }
        })?;
        for (i, (l, r)) in lhs.iter().zip(&rhs).enumerate() {
            if l != r {
                return Ok(Some(Mismatch {
                    vector: name.to_string(),
                    exponents: p.window()[i].clone(),
                    lhs: l.to_string(),
                    rhs: r.to_string(),
                }));
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, Serialize)]
pub struct LocalityReport {
    pub params: LocalityParams,
    /// Smallest exponent that made both sides agree on the window.
    pub n_loc: Option<u32>,
    /// First disagreement at the largest exponent tried, when none worked.
    pub witness: Option<Mismatch>,
}

/// Searches `n_loc = 0..=max_n_loc` for exact agreement.
pub fn check_s_locality(p: &LocalityParams, max_n_loc: u32) -> Result<LocalityReport> {
    let mut witness = None;
    for n in 0..=max_n_loc {
        match compare_s_locality(p, n, true)? {
            None => return Ok(LocalityReport { params: p.clone(), n_loc: Some(n), witness: None }),
            Some(m) => witness = Some(m),
        }
    }
    Ok(LocalityReport { params: p.clone(), n_loc: None, witness })
}

/// At `c = -2`: `(z1-z2-h) E(z1)E(z2)1 = (z1-z2+h) E(z2)E(z1)1` with
/// `E(z) = Y(x(-1)1, z)`, compared on the window of `p` (its `c` is ignored).
pub fn critical_level_check(p: &LocalityParams) -> Result<Option<Mismatch>> {
    let p = LocalityParams { c: Rat::from_int(-2), ..p.clone() };
    let lhs = locality_side(&p, 0, 1, &[], 0, |ctx| Ok(LinearForm::diff(0, 1).shift_h(&-Rat::one()).to_scalar(ctx)))?;
    let rhs = locality_side(&p, 1, 0, &[], 0, |ctx| Ok(LinearForm::diff(0, 1).shift_h(&Rat::one()).to_scalar(ctx)))?;
    for (i, (l, r)) in lhs.iter().zip(&rhs).enumerate() {
        if l != r {
            return Ok(Some(Mismatch {
                vector: "1".into(),
                exponents: p.window()[i].clone(),
                lhs: l.to_string(),
                rhs: r.to_string(),
            }));
        }
    }
    Ok(None)
}

/// Expansion of the single-variable prefactor `F(z)` of `Y(x(-1)1, z) x(-1)1` as a
/// series in `x = h/z`.
pub fn vertex_pair_series(c: &Rat, order: usize) -> Result<Vec<Rat>> {
    let ctx = ScalarContext::new(&[("z", Some(0))], order);
    let f = y_pair_factor(&ctx, &LinearForm::var(0), c)?;
    Ok((0..order as u32).map(|k| f.coeff(&[-(k as i32)], k).unwrap_or_else(|_| Rat::zero())).collect())
}

/// `h`-slices of an expanded scalar, handy for reports.
pub fn h_slices(s: &ExpandedScalar) -> BTreeMap<u32, BTreeMap<Vec<i32>, Rat>> {
    (0..s.context().order() as u32).map(|k| (k, s.h_slice(k))).filter(|(_, m)| !m.is_empty()).collect()
}
