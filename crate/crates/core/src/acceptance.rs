//! The acceptance suite. Each criterion returns a pass/fail line with the numbers that
//! decided it; the `acceptance` integration test and `--selftest` both run it.

use std::fmt;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cli::{run_sweep, transitions, render, JobConfig, SweepAxis, Task};
use crate::exponent::Exponent;
use crate::indices::{
    dominance_check, ellq_membership, sigma, sigma_bar, sigma_bar_numeric, sigma_inf, sigma_inf_numeric,
    sigma_numeric, Interval, PairContext,
};
use crate::phi::{validate_gp, Family, PhiSpec};
use crate::rate::RateTerm;
use crate::seqspace::{b_norm, n_norm_morrey, n_norm_star, NormParams};
use crate::tri::Tri;
use crate::verdict::{decide_morrey, decide_n, decide_n_classical, ClassicalParams, SpaceSpec, Verdict};
use crate::witness::{gn_check, random_seq, run_witness, Distribution, GnSecond, SEPARATION_FACTOR};

/// Outcome of one criterion.
#[derive(Clone, Debug, PartialEq)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "criterion {} [{}] {}: {}", self.id, status, self.name, self.detail)
    }
}

fn result(id: u8, name: &'static str, failures: &[String], summary: String) -> CriterionResult {
    let detail = match failures.first() {
        None => summary,
        Some(first) => format!("{summary}; {} failures, first: {first}", failures.len()),
    };
    CriterionResult { id, name, passed: failures.is_empty(), detail }
}

/// All nine criteria in order.
pub fn run_all() -> Vec<CriterionResult> {
    vec![
        classical_oracle(),
        norm_evaluators(),
        index_closed_forms(),
        index_bounds(),
        witness_separation(),
        gagliardo_nirenberg(),
        morrey_rules(),
        ellq_oracle(),
        cli_determinism(),
    ]
}

const TOL: f64 = 1e-9;

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= TOL
}

fn pair(v: &Verdict) -> (Tri, Tri) {
    (v.continuous, v.compact)
}

/// `(u, p)` with `p ≤ u` from `{0.5, 1, 2, 4}`.
pub fn classical_weights() -> Vec<(f64, f64)> {
    let vals = [0.5, 1.0, 2.0, 4.0];
    vals.iter().flat_map(|&u| vals.iter().filter(move |&&p| p <= u).map(move |&p| (u, p))).collect()
}

/// `decide_n` against the closed form on `d ∈ {1, 2}`, `(u, p)` pairs with `p ≤ u`,
/// `q ∈ {0.5, 1, 2, ∞}`, `s1 ∈ {−2, 0, 2}` and `s2 ∈ [−2, 2]` in steps of `0.25`.
pub fn classical_oracle() -> CriterionResult {
    let start = Instant::now();
    let qs = [Exponent::Finite(0.5), Exponent::Finite(1.0), Exponent::Finite(2.0), Exponent::Infinity];
    let s2s: Vec<f64> = (0..=16).map(|i| -2.0 + 0.25 * f64::from(i)).collect();
    let weights = classical_weights();
    let mut cases = Vec::new();
    for d in [1u32, 2] {
        for &(u1, p1) in &weights {
            for &(u2, p2) in &weights {
                for &q1 in &qs {
                    for &q2 in &qs {
                        cases.push((d, u1, p1, q1, u2, p2, q2));
                    }
                }
            }
        }
    }
    let outcomes: Vec<std::result::Result<usize, String>> = cases
        .par_iter()
        .map(|&(d, u1, p1, q1, u2, p2, q2)| {
            let mut checked = 0;
            for s1 in [-2.0, 0.0, 2.0] {
                let src = SpaceSpec::n(d, s1, p1, q1, Family::Power { u: u1 }).map_err(|e| e.to_string())?;
                for &s2 in &s2s {
                    let tgt = SpaceSpec::n(d, s2, p2, q2, Family::Power { u: u2 }).map_err(|e| e.to_string())?;
                    let general = decide_n(&src, &tgt).map_err(|e| format!("{} -> {}: {e}", src.label(), tgt.label()))?;
                    let closed = decide_n_classical(
                        &ClassicalParams { s: s1, u: u1, p: p1, q: q1 },
                        &ClassicalParams { s: s2, u: u2, p: p2, q: q2 },
                        d,
                    )
                    .map_err(|e| e.to_string())?;
                    if pair(&general) != pair(&closed) {
                        return Err(format!("{} -> {}", src.label(), tgt.label()));
                    }
                    checked += 1;
                }
            }
            Ok(checked)
        })
        .collect();
    let failures: Vec<String> = outcomes.iter().filter_map(|o| o.as_ref().err().cloned()).collect();
    let points: usize = outcomes.iter().filter_map(|o| o.as_ref().ok()).sum();
    let secs = start.elapsed().as_secs_f64();
    let mut failures = failures;
    if points < 5000 {
        failures.push(format!("only {points} grid points"));
    }
    if secs >= 60.0 {
        failures.push(format!("took {secs:.1} s"));
    }
    result(1, "classical oracle agreement", &failures, format!("{points} grid points agree in {secs:.1} s"))
}

/// Weights admissible for `G_p` in dimension `d`, used by the randomised criteria.
pub fn menu_for(p: f64, d: u32) -> Vec<Family> {
    let df = f64::from(d);
    let mut out = vec![
        Family::Power { u: p },
        Family::Power { u: 2.0 * p },
        Family::Constant,
        Family::InvLog { a: 64.0 },
        Family::PowerLog { p, a: -1.0, l: 2.0 },
        Family::PiecewisePower { u: Exponent::Finite(p), v: Exponent::Infinity },
    ];
    if p <= df {
        out.push(Family::PsiCritical { p });
    }
    if p <= df {
        out.push(Family::LogBlend);
    }
    out.retain(|f| {
        PhiSpec::new(f.clone(), d)
            .and_then(|phi| validate_gp(&phi, p, 64))
            .is_ok_and(|r| r.ok())
    });
    out
}

fn random_params(rng: &mut ChaCha8Rng, d: u32) -> NormParams {
    let ps = [0.5, 1.0, 2.0, 4.0];
    let qs = [Exponent::Finite(0.5), Exponent::Finite(1.0), Exponent::Finite(2.0), Exponent::Infinity];
    let p = ps[rng.gen_range(0..ps.len())];
    let q = qs[rng.gen_range(0..qs.len())];
    let menu = menu_for(p, d);
    let family = menu[rng.gen_range(0..menu.len())].clone();
    let s = rng.gen_range(-1.0..1.0);
    NormParams::new(s, p, q, PhiSpec::new(family, d).expect("menu weight")).expect("menu weight is admissible")
}

/// `n_norm_star` against `n_norm_morrey`, and `b_norm ≤ n_norm_star` with equality at
/// `q = ∞`, on 200 random sequences.
pub fn norm_evaluators() -> CriterionResult {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for i in 0..200 {
        let d = rng.gen_range(1..=2u32);
        let big_j = rng.gen_range(0..=5u32);
        let density = [0.05, 0.2, 0.5, 1.0][i % 4];
        let dist = if i % 3 == 0 { Distribution::DyadicDecaying } else { Distribution::Uniform01 };
        let lambda = random_seq(rng.gen(), d, big_j, density, dist).expect("small sequence");
        let params = random_params(&mut rng, d);
        let star = n_norm_star(&lambda, &params).expect("norm");
        let morrey = n_norm_morrey(&lambda, &params).expect("norm");
        let b = b_norm(&lambda, &params).expect("norm");
        let b_inf = b_norm(&lambda, &params.with_q(Exponent::Infinity)).expect("norm");
        let star_inf = n_norm_star(&lambda, &params.with_q(Exponent::Infinity)).expect("norm");
        let rel = |a: f64, b: f64| if a == 0.0 && b == 0.0 { 0.0 } else { (a - b).abs() / a.abs().max(b.abs()) };
        worst = worst.max(rel(star, morrey));
        if rel(star, morrey) > 1e-12 {
            failures.push(format!("case {i}: star {star} vs morrey {morrey}"));
        }
        if b > star * (1.0 + 1e-12) {
            failures.push(format!("case {i}: b {b} exceeds star {star}"));
        }
        if rel(b_inf, star_inf) > 1e-12 {
            failures.push(format!("case {i}: at q = inf b {b_inf} vs star {star_inf}"));
        }
    }
    result(2, "norm evaluator equality", &failures, format!("200 sequences, worst relative gap {worst:.2e}"))
}

fn interval_near(iv: Interval, x: f64, tol: f64) -> bool {
    (iv.lo - x).abs() <= tol && (iv.hi - x).abs() <= tol
}

/// Rate-algebra indices against the closed forms for `φ_i(t) = t^{d(1/p_i − τ_i)}`, the
/// inverse-log and critical weights, and the sampled slopes at `J = 200`.
pub fn index_closed_forms() -> CriterionResult {
    const NUMERIC_LEVELS: u32 = 200;
    const NUMERIC_TOL: f64 = 0.05;
    let mut failures = Vec::new();
    let mut cases = 0;
    let taus = [0.0, 0.1, 0.3];
    let ps = [1.0, 2.0, 4.0];
    let s1 = 0.7;
    for d in [1u32, 2] {
        let df = f64::from(d);
        for &p1 in &ps {
            for &t1 in taus.iter().filter(|&&t| t < 1.0 / p1) {
                for &p2 in &ps {
                    for &t2 in taus.iter().filter(|&&t| t < 1.0 / p2) {
                        cases += 1;
                        let phi1 = PhiSpec::normalized(Family::Power { u: 1.0 / (1.0 / p1 - t1) }, d).unwrap();
                        let phi2 = PhiSpec::normalized(Family::Power { u: 1.0 / (1.0 / p2 - t2) }, d).unwrap();
                        let inf = Exponent::Infinity;
                        let ctx = PairContext::new(p1, inf, &phi1, p2, inf, &phi2).unwrap();
                        let rho = ctx.rho;
                        let tag = format!("d={d} p=({p1},{p2}) tau=({t1},{t2})");
                        let want_sigma = if rho >= 1.0 {
                            s1
                        } else {
                            s1 - df / p1 + df / p2 + df * t1 * (1.0 - rho)
                        };
                        let want_inf = s1 - df / p1 + df * t1;
                        let got = sigma(s1, &phi1, rho);
                        if !close(got, want_sigma) {
                            failures.push(format!("{tag}: sigma {got} vs {want_sigma}"));
                        }
                        if !close(sigma_inf(s1, &phi1), want_inf) {
                            failures.push(format!("{tag}: sigma_inf"));
                        }
                        let admissible = if rho >= 1.0 { 1.0 / p1 - t1 - 1.0 / p2 + t2 >= -TOL } else { t2 - t1 * rho >= -TOL };
                        match (admissible, sigma_bar(s1, &ctx)) {
                            (true, Ok(sb)) => {
                                let want = s1 - df * (1.0 / p1 - t1 - 1.0 / p2 + t2);
                                if !close(sb, want) {
                                    failures.push(format!("{tag}: sigma_bar {sb} vs {want}"));
                                }
                                let iv = sigma_bar_numeric(s1, &ctx, NUMERIC_LEVELS).unwrap();
                                if !interval_near(iv, want, NUMERIC_TOL) {
                                    failures.push(format!("{tag}: sampled sigma_bar {iv:?}"));
                                }
                            }
                            (false, Err(_)) => {}
                            (a, b) => failures.push(format!("{tag}: admissible {a} but sigma_bar {b:?}")),
                        }
                        let iv = sigma_numeric(s1, &phi1, rho, NUMERIC_LEVELS).unwrap();
                        if !interval_near(iv, want_sigma, NUMERIC_TOL) {
                            failures.push(format!("{tag}: sampled sigma {iv:?}"));
                        }
                        let iv = sigma_inf_numeric(s1, &phi1, NUMERIC_LEVELS).unwrap();
                        if !interval_near(iv, want_inf, NUMERIC_TOL) {
                            failures.push(format!("{tag}: sampled sigma_inf {iv:?}"));
                        }
                    }
                }
            }
        }
    }
    // σ(s1) = s1 for the inverse-log weight, σ∞(s1) = s1 − d/p for the critical weight
    for s in [-1.0, 0.0, 1.0] {
        for rho in [0.25, 0.5, 1.0] {
            cases += 1;
            let inv = PhiSpec::normalized(Family::InvLog { a: 64.0 }, 1).unwrap();
            if !close(sigma(s, &inv, rho), s) {
                failures.push(format!("inverse log sigma at s1={s}, rho={rho}"));
            }
            let iv = sigma_numeric(s, &inv, rho, NUMERIC_LEVELS).unwrap();
            if !interval_near(iv, s, NUMERIC_TOL) {
                failures.push(format!("inverse log sampled sigma {iv:?}"));
            }
        }
        for (d, p) in [(1u32, 1.0), (2, 1.0), (2, 2.0)] {
            cases += 1;
            let psi = PhiSpec::normalized(Family::PsiCritical { p }, d).unwrap();
            let want = s - f64::from(d) / p;
            if !close(sigma_inf(s, &psi), want) {
                failures.push(format!("critical sigma_inf at d={d}, p={p}"));
            }
            let iv = sigma_inf_numeric(s, &psi, NUMERIC_LEVELS).unwrap();
            if !interval_near(iv, want, NUMERIC_TOL) {
                failures.push(format!("critical sampled sigma_inf {iv:?}"));
            }
        }
    }
    result(3, "index closed forms", &failures, format!("{cases} index cases"))
}

/// Every menu weight `φ1` against power, constant and inverse-log targets.
pub fn index_bounds() -> CriterionResult {
    let mut failures = Vec::new();
    let mut cases = 0;
    for d in [1u32, 2] {
        let df = f64::from(d);
        for p1 in [1.0, 2.0, 4.0] {
            for f1 in menu_for(p1, d).into_iter().chain(tabulated_menu(p1, d)) {
                let phi1 = PhiSpec::normalized(f1.clone(), d).unwrap();
                for p2 in [1.0, 2.0, 4.0] {
                    for f2 in [Family::Power { u: p2 }, Family::Constant, Family::InvLog { a: 64.0 }] {
                        let phi2 = PhiSpec::normalized(f2.clone(), d).unwrap();
                        let inf = Exponent::Infinity;
                        let ctx = PairContext::new(p1, inf, &phi1, p2, inf, &phi2).unwrap();
                        let dom = dominance_check(&ctx, 64).unwrap();
                        for s1 in [-1.0, 0.0, 1.0] {
                            cases += 1;
                            let tag = format!("{} p1={p1} / {} p2={p2} s1={s1}", f1.label(), f2.label());
                            let sg = sigma(s1, &phi1, ctx.rho);
                            let lo = s1 - df / p1 * (1.0 - ctx.rho);
                            if !(sg >= lo - TOL && sg <= s1 + TOL) {
                                failures.push(format!("{tag}: sigma {sg} outside [{lo}, {s1}]"));
                            }
                            let si = sigma_inf(s1, &phi1);
                            if !(si >= s1 - df / p1 - TOL && si <= s1 + TOL) {
                                failures.push(format!("{tag}: sigma_inf {si}"));
                            }
                            if dom.class.geq() {
                                match sigma_bar(s1, &ctx) {
                                    Ok(sb) if sb >= s1 - df / p1 - TOL && sb <= sg + TOL => {}
                                    other => failures.push(format!("{tag}: sigma_bar {other:?}")),
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    result(4, "index bounds", &failures, format!("{cases} weight pairs and smoothness values"))
}

/// A tabulated copy of `t^{d/p}` with its rate asserted.
pub fn tabulated_menu(p: f64, d: u32) -> Vec<Family> {
    let beta = f64::from(d) / p;
    let samples = (0..=256).map(|j| (-beta * f64::from(j)).exp2()).collect();
    vec![Family::Tabulated { samples, rate: RateTerm::new(beta, 0.0) }]
}

fn nspace(d: u32, s: f64, p: f64, q: Exponent, f: Family) -> SpaceSpec {
    SpaceSpec::n(d, s, p, q, f).expect("witness tuple")
}

/// Non-compact tuples: identities, boundary cases of the power scale and each branch
/// of the family selection.
pub fn noncompact_tuples() -> Vec<(SpaceSpec, SpaceSpec)> {
    use Exponent::{Finite, Infinity};
    let pw = |u| Family::Power { u };
    let id = |d, s, p, q, f: Family| (nspace(d, s, p, q, f.clone()), nspace(d, s, p, q, f));
    vec![
        id(1, 0.5, 2.0, Finite(2.0), pw(2.0)),
        id(1, 0.0, 2.0, Infinity, Family::InvLog { a: 64.0 }),
        id(1, 0.3, 1.0, Finite(1.0), Family::PsiCritical { p: 1.0 }),
        id(2, 1.0, 2.0, Infinity, pw(4.0)),
        // (s1 − s2)/d = 1/u1 − 1/u2 with u1/u2 < ϱ = 1, growing ratio
        (nspace(1, 0.25, 2.0, Finite(1.0), pw(2.0)), nspace(1, 0.0, 1.0, Finite(2.0), pw(4.0))),
        // s1 = s2 with u1 ≥ u2, ratio attained at level 0
        (nspace(1, 0.3, 2.0, Finite(1.0), pw(4.0)), nspace(1, 0.3, 2.0, Finite(2.0), pw(2.0))),
        (nspace(1, 0.0, 2.0, Finite(1.0), Family::Constant), nspace(1, 0.0, 2.0, Finite(1.0), Family::InvLog { a: 64.0 })),
        // target weight with a positive limit, ϱ = 1 and ϱ < 1
        (nspace(1, 0.2, 4.0, Finite(1.0), Family::Constant), nspace(1, 0.2, 2.0, Finite(2.0), Family::Constant)),
        (nspace(1, 0.2, 1.0, Finite(1.0), Family::Constant), nspace(1, 0.2, 2.0, Infinity, Family::Constant)),
        // ϱ = 1/2 with φ2 = φ1^ϱ
        (nspace(1, 0.5, 1.0, Finite(2.0), pw(1.0)), nspace(1, 0.0, 2.0, Finite(2.0), pw(2.0))),
    ]
}

/// Compact tuples with a clear decay rate of `ξ`.
pub fn compact_tuples() -> Vec<(SpaceSpec, SpaceSpec)> {
    use Exponent::{Finite, Infinity};
    let pw = |u| Family::Power { u };
    let drop = |d, s, ds, p, q1, q2, f: Family| (nspace(d, s, p, q1, f.clone()), nspace(d, s - ds, p, q2, f));
    vec![
        (nspace(1, 1.0, 1.0, Finite(2.0), pw(2.0)), nspace(1, 0.0, 2.0, Finite(2.0), pw(4.0))),
        drop(1, 0.5, 0.5, 2.0, Finite(1.0), Finite(1.0), Family::InvLog { a: 64.0 }),
        drop(1, 0.5, 0.5, 1.0, Finite(2.0), Infinity, Family::PsiCritical { p: 1.0 }),
        drop(2, 1.0, 1.0, 2.0, Infinity, Infinity, pw(4.0)),
        drop(1, 0.0, 0.5, 2.0, Finite(1.0), Finite(1.0), Family::PowerLog { p: 2.0, a: -1.0, l: 2.0 }),
        drop(1, 0.0, 1.0, 2.0, Infinity, Finite(1.0), pw(2.0)),
        (nspace(1, 0.5, 4.0, Finite(1.0), Family::Constant), nspace(1, 0.0, 2.0, Finite(1.0), Family::Constant)),
        (nspace(1, 1.0, 1.0, Finite(2.0), Family::LogBlend), nspace(1, 0.0, 2.0, Finite(2.0), pw(2.0))),
        drop(1, 0.0, 0.5, 2.0, Finite(2.0), Finite(2.0), tabulated_menu(2.0, 1).remove(0)),
        (
            SpaceSpec::b(1, 1.0, 1.0, Finite(2.0), pw(1.0)).unwrap(),
            SpaceSpec::classical_besov(1, -0.5, Infinity, Infinity).unwrap(),
        ),
    ]
}

/// Witness families at `J = 40`: separated for non-compact tuples, decaying ten-fold
/// over six consecutive gaps for compact ones.
pub fn witness_separation() -> CriterionResult {
    const J: u32 = 40;
    let mut failures = Vec::new();
    let mut worst_margin = f64::INFINITY;
    for (src, tgt) in noncompact_tuples() {
        let tag = format!("{} -> {}", src.label(), tgt.label());
        let v = decide_n(&src, &tgt);
        if !matches!(v.as_ref().map(pair), Ok((Tri::Yes, Tri::No))) {
            failures.push(format!("{tag}: expected continuous, not compact; got {v:?}"));
            continue;
        }
        match run_witness(&src, &tgt, J, 6) {
            Ok(r) => {
                let probe = r.probe.as_ref();
                let gap = probe.and_then(|p| p.min_pairwise_target_gap).unwrap_or(0.0);
                let src_norm = probe.map(|p| p.max_source_norm).unwrap_or(f64::INFINITY);
                let beta = r.beta_hat.unwrap_or(f64::INFINITY);
                worst_margin = worst_margin.min(gap / (SEPARATION_FACTOR * beta));
                if !(src_norm <= 2.0 && gap >= SEPARATION_FACTOR * beta) {
                    failures.push(format!("{tag}: source {src_norm}, gap {gap}, beta_hat {beta}, plan {:?}", r.plan));
                }
            }
            Err(e) => failures.push(format!("{tag}: {e}")),
        }
    }
    let mut worst_decay = f64::INFINITY;
    for (src, tgt) in compact_tuples() {
        let tag = format!("{} -> {}", src.label(), tgt.label());
        match crate::verdict::decide(&src, &tgt) {
            Ok(v) if v.compact == Tri::Yes => {}
            other => {
                failures.push(format!("{tag}: expected compact, got {other:?}"));
                continue;
            }
        }
        match run_witness(&src, &tgt, J, 7) {
            Ok(r) => {
                let decay = r.decay_factor.unwrap_or(0.0);
                worst_decay = worst_decay.min(decay);
                if decay < 10.0 {
                    failures.push(format!("{tag}: gap decay {decay}"));
                }
            }
            Err(e) => failures.push(format!("{tag}: {e}")),
        }
    }
    result(
        5,
        "witness separation",
        &failures,
        format!("10 + 10 tuples, smallest gap/(0.25 beta_hat) {worst_margin:.3}, smallest decay {worst_decay:.1}"),
    )
}

/// Random instances of both interpolation inequalities: the per-cube Hölder chain and
/// the global inequality with constant one.
pub fn gagliardo_nirenberg() -> CriterionResult {
    // per-cube ratios are products of powers and pick up a few ulps of rounding
    const CUBE_TOL: f64 = 1e-12;
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut failures = Vec::new();
    let (mut worst_cube, mut worst_global) = (0.0f64, 0.0f64);
    for i in 0..500 {
        let d = rng.gen_range(1..=2u32);
        let big_j = rng.gen_range(0..=4u32);
        let density = rng.gen_range(0.05..=1.0);
        let lambda = random_seq(rng.gen(), d, big_j, density, Distribution::Uniform01).unwrap();
        let mut first = random_params(&mut rng, d);
        first.s = rng.gen_range(0.0..2.0);
        let s2 = first.s - rng.gen_range(0.1..2.0);
        let theta = rng.gen_range(0.05..0.95);
        let second = if i % 2 == 0 {
            let mut p2 = random_params(&mut rng, d);
            p2.s = s2;
            GnSecond::Weighted(p2)
        } else {
            let qs = [Exponent::Finite(0.5), Exponent::Finite(1.0), Exponent::Finite(2.0), Exponent::Infinity];
            GnSecond::Sup { s: s2, q: qs[rng.gen_range(0..qs.len())] }
        };
        match gn_check(&lambda, &first, &second, theta) {
            Ok(r) => {
                worst_cube = worst_cube.max(r.max_cube_ratio);
                worst_global = worst_global.max(r.ratio);
                if r.max_cube_ratio > 1.0 + CUBE_TOL || r.ratio > 1.0 + 1e-9 {
                    failures.push(format!("instance {i}: cube {} global {}", r.max_cube_ratio, r.ratio));
                }
            }
            Err(e) => failures.push(format!("instance {i}: {e}")),
        }
    }
    result(
        6,
        "Gagliardo-Nirenberg",
        &failures,
        format!("500 instances, worst per-cube ratio {worst_cube:.15}, worst global ratio {worst_global:.15}"),
    )
}

/// `decide_morrey` never claims compactness, and matches the local Morrey rule
/// `p1 ≥ p2 and σ1 ≥ σ2` for `φ_i = t^{-σ_i}`.
pub fn morrey_rules() -> CriterionResult {
    let mut failures = Vec::new();
    let mut grid = 0;
    let ps = [0.5, 1.0, 2.0, 4.0, 8.0];
    for &p1 in &ps {
        for &p2 in &ps {
            for f1 in [Family::Power { u: p1 }, Family::Constant] {
                for f2 in [Family::Power { u: p2 }, Family::Constant] {
                    grid += 1;
                    let a = SpaceSpec::m(1, p1, f1.clone()).unwrap();
                    let b = SpaceSpec::m(1, p2, f2.clone()).unwrap();
                    match decide_morrey(&a, &b) {
                        Ok(v) if v.compact == Tri::No => {}
                        other => failures.push(format!("{} -> {}: {other:?}", a.label(), b.label())),
                    }
                }
            }
        }
    }
    let mut local = 0;
    let ps = [1.5, 2.0, 3.0];
    let sigmas = [-0.3, -0.2, -0.1];
    for &p1 in &ps {
        for &p2 in &ps {
            for &s1 in &sigmas {
                for &s2 in &sigmas {
                    local += 1;
                    let a = SpaceSpec::m(1, p1, Family::Power { u: -1.0 / s1 }).unwrap();
                    let b = SpaceSpec::m(1, p2, Family::Power { u: -1.0 / s2 }).unwrap();
                    let want = Tri::from_bool(p1 >= p2 && s1 >= s2);
                    match decide_morrey(&a, &b) {
                        Ok(v) if v.continuous == want && v.compact == Tri::No => {}
                        other => failures.push(format!("local p=({p1},{p2}) sigma=({s1},{s2}): {other:?}")),
                    }
                }
            }
        }
    }
    result(7, "Morrey rules", &failures, format!("{grid} compactness cases, {local} local Morrey cases"))
}

/// Partial sums `Σ_{j=a}^{b−1} a_j^q` of `a_j = 2^{-βj} j^γ`, accumulated in `log2`
/// space so growing terms saturate to infinity instead of wrapping.
fn block_sum(beta: f64, gamma: f64, q: f64, a: u64, b: u64) -> f64 {
    let mut sum = 0.0f64;
    for j in a..b {
        let x = j as f64;
        let l = q * (-beta * x + gamma * x.log2());
        if l > 1000.0 {
            return f64::INFINITY;
        }
        sum += l.exp2();
    }
    sum
}

/// Convergence read off two consecutive decades of a `10^6`-term partial sum: a
/// convergent power or geometric tail shrinks from one decade to the next, a divergent
/// one does not.
pub fn partial_sum_oracle(beta: f64, gamma: f64, q: Exponent) -> bool {
    match q {
        Exponent::Finite(q) => {
            let s1 = block_sum(beta, gamma, q, 10_000, 100_000);
            let s2 = block_sum(beta, gamma, q, 100_000, 1_000_000);
            if s2.is_infinite() {
                false
            } else if s2 < 1e-300 {
                true
            } else {
                s2 / s1 < 0.9
            }
        }
        Exponent::Infinity => {
            let log_term = |j: f64| -beta * j + gamma * j.log2();
            let head = (1..100_000).map(|j| log_term(j as f64)).fold(f64::NEG_INFINITY, f64::max);
            let tail = (100_000..1_000_000).map(|j| log_term(j as f64)).fold(f64::NEG_INFINITY, f64::max);
            tail <= head + 1e-9
        }
    }
}

/// The `(β, γ, q)` grid of the membership criterion.
pub fn membership_grid() -> Vec<(f64, f64, Exponent)> {
    use Exponent::{Finite, Infinity};
    let mut grid = Vec::new();
    for q in [Finite(0.5), Finite(1.0), Finite(2.0), Infinity] {
        for gamma in [-3.0, -2.0, -1.0, -0.5, 0.0, 0.5] {
            grid.push((0.0, gamma, q));
        }
    }
    grid.extend([
        (0.5, 2.0, Finite(1.0)),
        (0.05, 3.0, Finite(2.0)),
        (-0.05, -3.0, Finite(1.0)),
        (-0.5, 0.0, Infinity),
        (0.5, 0.0, Infinity),
        (0.01, 0.0, Finite(1.0)),
    ]);
    grid
}

pub fn ellq_oracle() -> CriterionResult {
    let grid = membership_grid();
    let failures: Vec<String> = grid
        .par_iter()
        .filter_map(|&(beta, gamma, q)| {
            let got = ellq_membership(RateTerm::new(beta, gamma), q).lq;
            let want = Tri::from_bool(partial_sum_oracle(beta, gamma, q));
            (got != want).then(|| format!("beta={beta} gamma={gamma} q={q}: {got} vs oracle {want}"))
        })
        .collect();
    result(8, "l_q membership oracle", &failures, format!("{} rate cases", grid.len()))
}

fn sweep_config(source: serde_json::Value, target: serde_json::Value) -> JobConfig {
    JobConfig {
        task: Task::Sweep,
        source: Some(source),
        target: Some(target),
        sweep: Some(SweepAxis { parameter: "s2".into(), start: -2.0, stop: 2.0, step: 0.1 }),
        truncation: 40,
        members: 6,
        seed: 0,
        sequence: None,
        random: None,
        output: Default::default(),
    }
}

/// Sweep configs over `s2` used by the determinism criterion.
pub fn sweep_configs() -> Vec<JobConfig> {
    use serde_json::json;
    vec![
        sweep_config(
            json!({"scale": "n", "d": 1, "s": 1.0, "p": 1.0, "q": 2.0, "phi": {"family": "power", "u": 2.0}}),
            json!({"scale": "n", "d": 1, "s": 0.0, "p": 2.0, "q": 2.0, "phi": {"family": "power", "u": 4.0}}),
        ),
        sweep_config(
            json!({"scale": "n", "d": 2, "s": 0.5, "p": 2.0, "q": "inf", "phi": {"family": "inv_log", "a": 64.0}}),
            json!({"scale": "n", "d": 2, "s": 0.0, "p": 2.0, "q": 1.0, "phi": {"family": "inv_log", "a": 64.0}}),
        ),
        sweep_config(
            json!({"scale": "b", "d": 1, "s": 1.0, "p": 1.0, "q": 1.0, "phi": {"family": "psi_critical", "p": 1.0}}),
            json!({"scale": "b", "d": 1, "s": 0.0, "p": 2.0, "q": 2.0, "phi": {"family": "power", "u": 2.0}}),
        ),
        sweep_config(
            json!({"scale": "b", "d": 1, "s": 1.0, "p": 2.0, "q": 2.0, "phi": {"family": "power", "u": 2.0}}),
            json!({"scale": "classical_besov", "d": 1, "s": 0.0, "p": "inf", "q": "inf"}),
        ),
    ]
}

/// Repeated sweeps render byte-identically and change verdict at most twice along `s2`.
pub fn cli_determinism() -> CriterionResult {
    let mut failures = Vec::new();
    let mut total = 0;
    for cfg in sweep_configs() {
        let first = render(&cfg, None);
        let second = render(&cfg, None);
        match (first, second) {
            (Ok(a), Ok(b)) if a == b => {}
            (a, b) => failures.push(format!("sweep outputs differ or fail: {:?} / {:?}", a.err(), b.err())),
        }
        match run_sweep(&cfg) {
            Ok(rows) => {
                let t = transitions(&rows);
                total += rows.len();
                if t > 2 {
                    failures.push(format!("{t} transitions in sweep of {:?}", cfg.source));
                }
                if rows.iter().any(|r| r.continuous == "error") {
                    failures.push("sweep row failed to evaluate".to_string());
                }
            }
            Err(e) => failures.push(e.message),
        }
    }
    result(9, "CLI determinism and sweep structure", &failures, format!("4 sweeps, {total} grid points"))
}
