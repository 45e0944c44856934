//! Acceptance run: one PASS/FAIL line per criterion, exact arithmetic only.
//!
//! Criterion 9 asks for poles at h-order 1, where the product has none; that
//! check is run as stated and is expected to fail. The line also reports the
//! same witness at the first h-order where it can exist.

use std::time::{Duration, Instant};

use num_traits::{One, Zero};

use qva_core::characters::character_qp_basis;
use qva_core::ideal::{
    ideal_graded_span, principal_generator_closure, quotient_basis_count, quotient_graded_dims,
    tneq0_degree2_expansion, IdealSpec,
};
use qva_core::principal::{enumerate_qp_basis_degree, transition_matrix};
use qva_core::relations::relations_suite;
use qva_core::rmatrix::{crossing_products, unitarity_product};
use qva_core::series::{g_reflection_residual, g_series, g_shift_residual};
use qva_core::vertex::{check_s_locality, critical_level_check, pole_coefficients, LocalityParams};
use qva_core::Rat;

/// Criteria whose literal statement cannot hold.
const KNOWN_UNATTAINABLE: &[u32] = &[9];

struct Outcome {
    id: u32,
    passed: bool,
}

fn run(id: u32, title: &str, budget: Duration, f: impl FnOnce() -> (bool, String)) -> Outcome {
    let start = Instant::now();
    let (ok, detail) = f();
    let elapsed = start.elapsed();
    let in_time = elapsed <= budget;
    let passed = ok && in_time;
    println!(
        "{} criterion {id}: {title} [{:.2}s of {}s] {detail}{}",
        if passed { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        budget.as_secs(),
        if in_time { "" } else { " (over time budget)" }
    );
    Outcome { id, passed }
}

// Independent oracles -------------------------------------------------------

fn poly_mul(a: &[Rat], b: &[Rat], n: usize) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); n];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            if i + j < n {
                out[i + j] += &(x * y);
            }
        }
    }
    out
}

/// `g_1, g_2, ...` from `G(x/(1+2x)) = G(x)(1-x^2)`, solving the `x^{n+1}`
/// equation for `g_n` with dense polynomials.
fn g_oracle(n: usize) -> Vec<Rat> {
    let len = n + 2;
    // y = x/(1+2x) = sum_{i>=1} (-2)^{i-1} x^i
    let y: Vec<Rat> =
        (0..len).map(|i| if i == 0 { Rat::zero() } else { Rat::from_int(-2).pow(i as i32 - 1) }).collect();
    let mut g = vec![Rat::one()];
    while g.len() <= n {
        let m = g.len();
        // g_{m+1} cancels from the x^{m+1} equation, which is then affine in g_m
        let eval = |gs: &[Rat]| -> Rat {
            let mut lhs = Rat::zero();
            let mut pow = vec![Rat::zero(); len];
            pow[0] = Rat::one();
            for c in gs {
                lhs += &(c * &pow[m + 1]);
                pow = poly_mul(&pow, &y, len);
            }
            let mut rhs = gs.get(m + 1).cloned().unwrap_or_else(Rat::zero);
            rhs -= &gs[m - 1];
            &lhs - &rhs
        };
        let mut trial = g.clone();
        trial.push(Rat::zero());
        let a = eval(&trial);
        trial[m] = Rat::one();
        let b = eval(&trial);
        g.push(&-&a * &(&b - &a).recip());
    }
    g
}

fn partitions_count_oracle(d: u32) -> u64 {
    fn go(rest: u32, max: u32) -> u64 {
        if rest == 0 {
            return 1;
        }
        (1..=rest.min(max)).map(|p| go(rest - p, p)).sum()
    }
    go(d, d)
}

fn difference_two_count(d: u32) -> u64 {
    fn go(rest: u32, max: u32) -> u64 {
        if rest == 0 {
            return 1;
        }
        (1..=rest.min(max)).map(|p| go(rest - p, p.saturating_sub(2))).sum()
    }
    go(d, d)
}

fn rogers_ramanujan_sum(n: usize) -> Vec<u64> {
    let mul = |a: &[i64], b: &[i64]| -> Vec<i64> {
        let mut out = vec![0; n + 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                if i + j <= n {
                    out[i + j] += x * y;
                }
            }
        }
        out
    };
    let mut total = vec![0i64; n + 1];
    let mut r = 0;
    while r * r <= n {
        let mut term = vec![0i64; n + 1];
        term[r * r] = 1;
        for m in 1..=r {
            let geo: Vec<i64> = (0..=n).map(|i| (i % m == 0) as i64).collect();
            term = mul(&term, &geo);
        }
        for (t, x) in total.iter_mut().zip(&term) {
            *t += x;
        }
        r += 1;
    }
    total.into_iter().map(|x| x as u64).collect()
}

// Criteria ------------------------------------------------------------------

fn criterion_1() -> (bool, String) {
    let shift = g_shift_residual(31).is_zero();
    let g = g_series(31);
    let oracle = g_oracle(30);
    let coeffs_match = (0..=30).all(|n| g.coeff(n) == &oracle[n]);
    let half = g.coeff(1) == &Rat::new(1, 2);
    let reflection = g_reflection_residual(31).map(|r| r.is_zero()).unwrap_or(false);
    (
        shift && coeffs_match && half && reflection,
        format!("shift residual zero={shift}, g_1=1/2: {half}, oracle agrees={coeffs_match}, reflection={reflection}"),
    )
}

fn criterion_2() -> (bool, String) {
    let uni = unitarity_product(21).map(|m| m.is_identity()).unwrap_or(false);
    let (rl, lr) = crossing_products(21).map(|(a, b)| (a.is_identity(), b.is_identity())).unwrap_or((false, false));
    (uni && rl && lr, format!("unitarity={uni}, crossing RL={rl}, LR={lr} through h^20"))
}

fn criterion_3() -> (bool, String) {
    let mut ok = true;
    let mut detail = String::new();
    let counts: Vec<usize> = (0..=20).map(|d| enumerate_qp_basis_degree(d, None).len()).collect();
    for d in 0..=20u32 {
        if counts[d as usize] as u64 != partitions_count_oracle(d) {
            ok = false;
            detail += &format!(" count mismatch at d={d};");
        }
    }
    for t in [0, 1, -1, 2] {
        let t = Rat::from_int(t);
        match transition_matrix(12, &t, 2) {
            Ok(m) => {
                // the columns are the same basis for every t
                ok &= m.cols.len() == counts[..=12].iter().sum::<usize>();
                if !m.classical_blocks_invertible() {
                    ok = false;
                    detail += &format!(" singular block at t={t};");
                }
            }
            Err(e) => {
                ok = false;
                detail += &format!(" t={t}: {e};");
            }
        }
    }
    (ok, format!("counts p(0..20) ok, t in {{0,1,-1,2}}, blocks d<=12 invertible{detail}"))
}

fn criterion_4() -> (bool, String) {
    let ranks = match quotient_graded_dims(1, 20) {
        Ok(v) => v,
        Err(e) => return (false, e.to_string()),
    };
    let enumerated = character_qp_basis(20, Some(1)).coeffs;
    let rr = rogers_ramanujan_sum(20);
    let mut ok = true;
    for d in 0..=20usize {
        let oracle = difference_two_count(d as u32);
        ok &= ranks[d] as u64 == oracle && enumerated[d] == oracle && rr[d] == oracle;
    }
    (ok, format!("dims {ranks:?}"))
}

fn criterion_5() -> (bool, String) {
    let mut ok = true;
    for k in [1, 2] {
        for d in 0..=10 {
            let spec = IdealSpec::new(k, Rat::zero(), d, 1).expect("k >= 1");
            let rank = ideal_graded_span(&spec, d).map(|s| s.rank_h0).unwrap_or(usize::MAX);
            ok &= rank + quotient_basis_count(k, d) == partitions_count_oracle(d) as usize;
        }
    }
    (ok, "k in {1,2}, d <= 10".into())
}

fn criterion_6() -> (bool, String) {
    let mut ok = true;
    for k in [1, 2] {
        match principal_generator_closure(k, k + 5, 2) {
            Ok(r) => ok &= r.passed(),
            Err(_) => ok = false,
        }
    }
    (ok, "k in {1,2}, p <= k+5".into())
}

fn criterion_7() -> (bool, String) {
    let mut total = 0;
    let mut failed = Vec::new();
    for t in [1, 2] {
        match relations_suite(5, &Rat::from_int(t), 2) {
            Ok(checks) => {
                total += checks.len();
                failed.extend(checks.into_iter().filter(|c| !c.passed).map(|c| format!("{} {}", c.name, c.params)));
            }
            Err(e) => failed.push(e.to_string()),
        }
    }
    (failed.is_empty(), format!("{total} checks, failures: {failed:?}"))
}

fn criterion_8() -> (bool, String) {
    let mut ok = true;
    let mut found = Vec::new();
    for c in [0, 1, -2] {
        let p = LocalityParams::new(Rat::from_int(c), 6);
        match check_s_locality(&p, 4) {
            Ok(r) => {
                ok &= r.n_loc.is_some();
                found.push(format!("c={c}: N_loc={:?}", r.n_loc));
            }
            Err(e) => {
                ok = false;
                found.push(e.to_string());
            }
        }
    }
    let critical =
        critical_level_check(&LocalityParams::new(Rat::from_int(-2), 6)).map(|m| m.is_none()).unwrap_or(false);
    (ok && critical, format!("{}; critical-level relation={critical}", found.join(", ")))
}

fn criterion_9() -> (bool, String) {
    let nonzero = |order: usize| {
        pole_coefficients(&Rat::from_int(-2), order, 10).map(|v| v.iter().filter(|w| !w.is_zero()).count()).unwrap_or(0)
    };
    let literal = nonzero(1);
    let extended = nonzero(11);
    (
        literal == 10,
        format!(
            "h-order 1: {literal}/10 poles nonzero (the product has no poles mod h); h-order 11: {extended}/10 nonzero"
        ),
    )
}

fn criterion_10() -> (bool, String) {
    let mut ok = true;
    for t in [1, 2] {
        match tneq0_degree2_expansion(&Rat::from_int(t), 3, 6) {
            Ok(r) => ok &= r.passed(),
            Err(_) => ok = false,
        }
    }
    (ok, "t in {1,2}, z^0..z^6".into())
}

#[test]
fn acceptance() {
    let s = Duration::from_secs;
    let outcomes = [
        run(1, "g-series", s(1), criterion_1),
        run(2, "R-matrix unitarity and crossing", s(1), criterion_2),
        run(3, "basis counting", s(30), criterion_3),
        run(4, "level-1 quotient character", s(60), criterion_4),
        run(5, "complementarity", s(60), criterion_5),
        run(6, "principal generator", s(10), criterion_6),
        run(7, "relations suite", s(120), criterion_7),
        run(8, "S-locality", s(120), criterion_8),
        run(9, "infinite-order pole witness", s(10), criterion_9),
        run(10, "degree-two expansion at t != 0", s(5), criterion_10),
    ];
    let failing: Vec<u32> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id).collect();
    assert_eq!(failing, KNOWN_UNATTAINABLE, "unexpected acceptance outcome");
}
