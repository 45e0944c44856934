//! Verification suites behind `qva verify`.

use num_traits::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use qva_core::characters::{character_qp_basis, character_quotient};
use qva_core::ideal::{
    factorization_check, ideal_graded_span, membership_test, principal_generator_closure, quotient_basis_count,
    tneq0_degree2_expansion, IdealSpec,
};
use qva_core::partitions::{partition_counts, partitions};
use qva_core::principal::{enumerate_qp_basis_degree, qp_monomial_to_w, transition_matrix, PbwMonomial, WElement};
use qva_core::relations::relations_suite;
use qva_core::rmatrix::{crossing_products, unitarity_product};
use qva_core::series::{g_reflection_residual, g_series, g_shift_residual, g_unitarity_residual};
use qva_core::vertex::{check_s_locality, critical_level_check, LocalityParams};
use qva_core::{HSeries, Rat, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    G,
    Rmatrix,
    Basis,
    Ideal,
    Relations,
    Slocality,
    All,
}

/// Settings shared by the suites; `None` lets each suite pick its default.
#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub order: Option<usize>,
    pub level: u32,
    pub t: Rat,
    pub degree: Option<u32>,
    pub pmax: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub params: String,
    pub passed: bool,
    /// First failing coefficient or other evidence, when available.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Check {
    fn new(suite: &'static str, name: impl Into<String>, params: impl Into<String>, passed: bool) -> Check {
        Check { suite, name: name.into(), params: params.into(), passed, witness: None }
    }

    fn with_witness(mut self, w: Option<String>) -> Check {
        self.witness = w;
        self
    }
}

fn first_nonzero(s: &HSeries) -> Option<String> {
    s.coeffs().iter().position(|c| !c.is_zero()).map(|k| format!("h^{k}: {}", s.coeff(k)))
}

fn g_suite(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let n = cfg.order.unwrap_or(30);
    let p = format!("N={n}");
    let shift = g_shift_residual(n);
    let uni = g_unitarity_residual(n);
    let refl = g_reflection_residual(n)?;
    let mut out = vec![
        Check::new("g", "shift", &p, shift.is_zero()).with_witness(first_nonzero(&shift)),
        Check::new("g", "unitarity", &p, uni.is_zero()).with_witness(first_nonzero(&uni)),
        Check::new("g", "reflection", &p, refl.is_zero()).with_witness((!refl.is_zero()).then(|| refl.to_string())),
    ];
    if n >= 2 {
        out.push(Check::new("g", "first coefficient 1/2", &p, g_series(n).coeff(1) == &Rat::new(1, 2)));
    }
    Ok(out)
}

fn rmatrix_suite(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let n = cfg.order.unwrap_or(20);
    let p = format!("N={n}");
    let uni = unitarity_product(n)?;
    let (rl, lr) = crossing_products(n)?;
    let witness = |m: &qva_core::rmatrix::MatrixOperator| (!m.is_identity()).then(|| format!("{m:?}"));
    Ok(vec![
        Check::new("rmatrix", "unitarity", &p, uni.is_identity()).with_witness(witness(&uni)),
        Check::new("rmatrix", "crossing rl", &p, rl.is_identity()).with_witness(witness(&rl)),
        Check::new("rmatrix", "crossing lr", &p, lr.is_identity()).with_witness(witness(&lr)),
    ])
}

fn basis_suite(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let d = cfg.degree.unwrap_or(12);
    let n = cfg.order.unwrap_or(2);
    let counts = partition_counts(d);
    let mut out = Vec::new();
    for deg in 0..=d {
        let got = enumerate_qp_basis_degree(deg, None).len() as u64;
        out.push(
            Check::new("basis", "count equals p(d)", format!("d={deg}"), got == counts[deg as usize])
                .with_witness((got != counts[deg as usize]).then(|| format!("{got} vs {}", counts[deg as usize]))),
        );
    }
    let m = transition_matrix(d, &cfg.t, n)?;
    let singular: Vec<usize> =
        m.classical_block_dets.iter().enumerate().filter(|(_, x)| x.is_zero()).map(|(i, _)| i).collect();
    out.push(
        Check::new("basis", "classical blocks invertible", format!("D={d} t={} N={n}", cfg.t), singular.is_empty())
            .with_witness((!singular.is_empty()).then(|| format!("singular in degrees {singular:?}"))),
    );
    Ok(out)
}

fn monomial(parts: Vec<u32>, cap: u32, order: usize) -> WElement {
    WElement::monomial(PbwMonomial::new(parts), HSeries::one(order), cap)
}

fn ideal_suite(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<Vec<Check>> {
    let k = cfg.level;
    let d = cfg.degree.unwrap_or(10);
    let mut out = Vec::new();
    for deg in 0..=d {
        let spec = IdealSpec::new(k, Rat::zero(), deg, 1)?;
        let rank = ideal_graded_span(&spec, deg)?.rank_h0;
        let quotient = quotient_basis_count(k, deg);
        let p = partitions(deg).len();
        out.push(
            Check::new("ideal", "complementarity", format!("k={k} d={deg}"), rank + quotient == p)
                .with_witness((rank + quotient != p).then(|| format!("rank {rank} + {quotient} != {p}"))),
        );
    }
    let by_rank = character_quotient(k, d)?;
    let by_count = character_qp_basis(d, Some(k));
    out.push(
        Check::new("ideal", "quotient character", format!("k={k} D={d}"), by_rank.coeffs == by_count.coeffs)
            .with_witness(
                (by_rank.coeffs != by_count.coeffs).then(|| format!("{:?} vs {:?}", by_rank.coeffs, by_count.coeffs)),
            ),
    );
    let gen = principal_generator_closure(k, (k + 5).min(d.max(k + 1)), 2)?;
    let bad: Vec<u32> = gen.coefficients.iter().filter(|(_, ok)| !ok).map(|(p, _)| *p).collect();
    out.push(
        Check::new("ideal", "principal generator", format!("k={k}"), gen.passed()).with_witness(
            (!gen.passed()).then(|| format!("p={bad:?} negative powers absent={}", gen.no_negative_powers)),
        ),
    );
    for kk in 1..=6u32 {
        for l in 1..=(7 - kk) {
            out.push(Check::new(
                "ideal",
                "factorization",
                format!("k={kk} l={l} t={}", cfg.t),
                factorization_check(kk, l, &cfg.t)?,
            ));
        }
    }
    let t = if cfg.t.is_zero() { Rat::from_int(1) } else { cfg.t.clone() };
    let r = tneq0_degree2_expansion(&t, 3, 6)?;
    out.push(
        Check::new("ideal", "degree-two expansion", format!("t={t}"), r.passed())
            .with_witness((!r.passed()).then(|| format!("{r:?}"))),
    );
    // randomized: products with ideal vectors stay inside, quotient vectors stay outside
    let cap = d.max(k + 1);
    let order = 2;
    let spec = IdealSpec::new(k, Rat::zero(), cap, order)?;
    for _ in 0..8 {
        let p = rng.gen_range(k + 1..=cap);
        let rest = cap - p;
        let parts = random_parts(rng, rest);
        let c = Rat::from_int(rng.gen_range(1..=5));
        let w = monomial(parts.clone(), cap, order).try_mul(&spec.generator(p)?)?.scale(&c);
        out.push(Check::new(
            "ideal",
            "closure under multiplication",
            format!("k={k} p={p} b={parts:?}"),
            membership_test(&w, &spec)?,
        ));
    }
    for _ in 0..4 {
        let deg = rng.gen_range(0..=cap);
        let basis = enumerate_qp_basis_degree(deg, Some(k));
        let mut w = WElement::zero(cap, order);
        for q in &basis {
            let c = Rat::from_int(rng.gen_range(-3..=3));
            w = w.try_add(&qp_monomial_to_w(q, &Rat::zero(), order, cap)?.scale(&c))?;
        }
        if w.is_zero() {
            w = qp_monomial_to_w(&basis[0], &Rat::zero(), order, cap)?;
        }
        out.push(Check::new(
            "ideal",
            "quotient vectors outside",
            format!("k={k} d={deg}"),
            !membership_test(&w, &spec)?,
        ));
    }
    Ok(out)
}

/// Random positive parts summing to `n`.
fn random_parts(rng: &mut ChaCha8Rng, mut n: u32) -> Vec<u32> {
    let mut parts = Vec::new();
    while n > 0 {
        let p = rng.gen_range(1..=n);
        parts.push(p);
        n -= p;
    }
    parts
}

fn relations_checks(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let checks = relations_suite(cfg.pmax, &cfg.t, 2)?;
    Ok(checks
        .into_iter()
        .map(|c| {
            let w = (!c.passed).then(|| c.detail.clone());
            Check::new("relations", c.name, c.params, c.passed).with_witness(w)
        })
        .collect())
}

fn slocality_suite(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let n = cfg.order.unwrap_or(6);
    let mut out = Vec::new();
    for c in [0, 1, -2] {
        let p = LocalityParams::new(Rat::from_int(c), n);
        let r = check_s_locality(&p, 4)?;
        out.push(
            Check::new("slocality", "s-locality", format!("c={c} N={n} N_loc={:?}", r.n_loc), r.n_loc.is_some())
                .with_witness(r.witness.map(|m| format!("{m:?}"))),
        );
    }
    let m = critical_level_check(&LocalityParams::new(Rat::from_int(-2), n))?;
    out.push(
        Check::new("slocality", "critical level", format!("c=-2 N={n}"), m.is_none())
            .with_witness(m.map(|m| format!("{m:?}"))),
    );
    Ok(out)
}

pub fn run(suite: Suite, cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<Vec<Check>> {
    Ok(match suite {
        Suite::G => g_suite(cfg)?,
        Suite::Rmatrix => rmatrix_suite(cfg)?,
        Suite::Basis => basis_suite(cfg)?,
        Suite::Ideal => ideal_suite(cfg, rng)?,
        Suite::Relations => relations_checks(cfg)?,
        Suite::Slocality => slocality_suite(cfg)?,
        Suite::All => {
            let mut out = Vec::new();
            for s in [Suite::G, Suite::Rmatrix, Suite::Basis, Suite::Ideal, Suite::Relations, Suite::Slocality] {
                out.extend(run(s, cfg, rng)?);
            }
            out
        }
    })
}
