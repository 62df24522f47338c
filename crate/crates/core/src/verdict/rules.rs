use std::cmp::Ordering;

use super::space::{Scale, SpaceSpec};
use super::{Trace, Verdict};
use crate::error::{invalid, Error, Result};
use crate::exponent::Exponent;
use crate::indices::{
    alpha_rate, dominance_check, ellq_membership, sigma, sigma_bar, sigma_bar_numeric, sigma_inf, sigma_numeric,
    xi_rate, PairContext,
};
use crate::phi::{Family, PhiSpec};
use crate::rate::{sign_tol, Confidence, RateTerm, RATE_TOL};
use crate::tri::Tri;

/// Levels sampled by the dominance check.
const DOMINANCE_LEVELS: u32 = 64;

/// Levels used for the numeric index intervals reported next to asserted rates.
const NUMERIC_LEVELS: u32 = 200;

fn lt(a: f64, b: f64) -> bool {
    a < b - RATE_TOL
}

fn le(a: f64, b: f64) -> bool {
    a <= b + RATE_TOL
}

fn eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= RATE_TOL
}

fn same_dim(src: &SpaceSpec, tgt: &SpaceSpec) -> Result<()> {
    if src.d != tgt.d {
        return Err(Error::DimensionMismatch(src.d, tgt.d));
    }
    Ok(())
}

fn expect_scale(spec: &SpaceSpec, scales: &[Scale], op: &str) -> Result<()> {
    if scales.contains(&spec.scale) {
        Ok(())
    } else {
        Err(Error::Unsupported(format!("{op} does not take {}", spec.label())))
    }
}

fn context(src: &SpaceSpec, tgt: &SpaceSpec) -> Result<PairContext> {
    PairContext::new(src.p.value(), src.q, &src.phi, tgt.p.value(), tgt.q, &tgt.phi)
}

/// The index part of a trace, shared by the `N`, `B` and `E` decisions.
fn index_trace(ctx: &PairContext, s1: f64) -> Result<Trace> {
    let dom = dominance_check(ctx, DOMINANCE_LEVELS)?;
    let mut trace = Trace {
        alpha_rate: Some(alpha_rate(ctx)),
        sigma: Some(sigma(s1, &ctx.phi1, ctx.rho)),
        sigma_inf: Some(sigma_inf(s1, &ctx.phi1)),
        sigma_bar: if dom.class.geq() { sigma_bar(s1, ctx).ok() } else { None },
        dominance: Some(dom.class),
        qstar: Some(ctx.qstar),
        rho: Some(ctx.rho),
        ..Trace::default()
    };
    if dom.asserted {
        trace.notes.push("weight rates are asserted, not derived".to_string());
        if let Ok(iv) = sigma_numeric(s1, &ctx.phi1, ctx.rho, NUMERIC_LEVELS) {
            trace.notes.push(format!("sampled sigma in [{:.6}, {:.6}]", iv.lo, iv.hi));
        }
        if dom.class.geq() {
            if let Ok(iv) = sigma_bar_numeric(s1, ctx, NUMERIC_LEVELS) {
                trace.notes.push(format!("sampled sigma_bar in [{:.6}, {:.6}]", iv.lo, iv.hi));
            }
        }
    }
    Ok(trace)
}

fn any_low(rates: &[RateTerm]) -> bool {
    rates.iter().any(|r| r.confidence == Confidence::Low)
}

/// The `ξ` criterion: continuity iff `ξ ∈ ℓ_{q*}`, compactness iff `ξ ∈ ℓ_{q*}` for
/// `q1 > q2` and `ξ ∈ c_0` otherwise.
fn n_core(src: &SpaceSpec, tgt: &SpaceSpec, rules: &[&str]) -> Result<Verdict> {
    same_dim(src, tgt)?;
    let ctx = context(src, tgt)?;
    let mut trace = index_trace(&ctx, src.s)?;
    let xi = xi_rate(&ctx, src.s, tgt.s);
    trace.xi_rate = Some(xi);
    if xi.is_low() {
        return Ok(Verdict::unknown(rules, trace, "low-confidence weight rate"));
    }
    let m = ellq_membership(xi, ctx.qstar);
    let compact = if ctx.qstar.is_finite() { m.lq } else { m.c0 };
    Verdict::settle(m.lq, compact, rules, trace)
}

fn power_u(phi: &PhiSpec) -> Option<f64> {
    match phi.family() {
        Family::Power { u } => Some(*u),
        _ => None,
    }
}

/// `N^{s1}_{φ1,p1,q1} → N^{s2}_{φ2,p2,q2}`. For two power weights the closed form is
/// evaluated as well, and a disagreement is an invariant violation.
pub fn decide_n(src: &SpaceSpec, tgt: &SpaceSpec) -> Result<Verdict> {
    expect_scale(src, &[Scale::N], "decide_n")?;
    expect_scale(tgt, &[Scale::N], "decide_n")?;
    let mut v = n_core(src, tgt, &["th-cont", "th:comp", "th-cont-BM"])?;
    if let (Some(u1), Some(u2)) = (power_u(&src.phi), power_u(&tgt.phi)) {
        let a = ClassicalParams { s: src.s, u: u1, p: src.p.value(), q: src.q };
        let b = ClassicalParams { s: tgt.s, u: u2, p: tgt.p.value(), q: tgt.q };
        if let Ok(c) = decide_n_classical(&a, &b, src.d) {
            if (c.continuous, c.compact) != (v.continuous, v.compact) {
                return Err(Error::Invariant(format!(
                    "closed form gives ({}, {}) but the xi criterion gives ({}, {}) for {} -> {}",
                    c.continuous,
                    c.compact,
                    v.continuous,
                    v.compact,
                    src.label(),
                    tgt.label()
                )));
            }
            v.push_rule("comp-class_new");
        }
    }
    Ok(v)
}

/// Parameters `(s, u, p, q)` of a space with weight `t^{d/u}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassicalParams {
    pub s: f64,
    pub u: f64,
    pub p: f64,
    pub q: Exponent,
}

/// Closed form for power weights `t^{d/u_i}`, `0 < p_i ≤ u_i < ∞`: with
/// `T = (p1/u1)(1/p1 − 1/p2)_+` when `u1/u2 ≥ ϱ` and `T = 1/u1 − 1/u2` otherwise, the
/// embedding is continuous iff `(s1 − s2)/d > T`, or equality and `q1 ≤ q2`, and
/// compact iff the inequality is strict.
pub fn decide_n_classical(a: &ClassicalParams, b: &ClassicalParams, d: u32) -> Result<Verdict> {
    for c in [a, b] {
        if !(c.p > 0.0 && c.p <= c.u && c.u.is_finite() && c.s.is_finite() && c.q.is_valid()) {
            return Err(invalid(format!("closed form needs 0 < p <= u < inf, got p = {}, u = {}", c.p, c.u)));
        }
    }
    let rho = (a.p / b.p).min(1.0);
    let threshold = if a.u / b.u >= rho {
        (a.p / a.u) * (1.0 / a.p - 1.0 / b.p).max(0.0)
    } else {
        1.0 / a.u - 1.0 / b.u
    };
    let gap = (a.s - b.s) / f64::from(d);
    let strict = gap > threshold + RATE_TOL;
    let boundary = (gap - threshold).abs() <= RATE_TOL;
    let continuous = strict || (boundary && a.q.value() <= b.q.value());
    let trace = Trace { rho: Some(rho), notes: vec![format!("threshold (s1-s2)/d > {threshold}")], ..Trace::default() };
    Verdict::settle(Tri::from_bool(continuous), Tri::from_bool(strict), &["comp-class_new"], trace)
}

/// `E^{s1}_{φ1,p1,q1} → E^{s2}_{φ2,p2,q2}`: compact when `ξ ∈ ℓ_{min(p2,q2)}`, not
/// continuous when `ξ ∉ ℓ_∞`, unknown in between.
pub fn decide_e(src: &SpaceSpec, tgt: &SpaceSpec) -> Result<Verdict> {
    expect_scale(src, &[Scale::E], "decide_e")?;
    expect_scale(tgt, &[Scale::E], "decide_e")?;
    same_dim(src, tgt)?;
    let rules = ["comp-GTLM", "Rmk5.8"];
    let ctx = context(src, tgt)?;
    let mut trace = index_trace(&ctx, src.s)?;
    let xi = xi_rate(&ctx, src.s, tgt.s);
    trace.xi_rate = Some(xi);
    if xi.is_low() {
        return Ok(Verdict::unknown(&rules, trace, "low-confidence weight rate"));
    }
    let small = Exponent::Finite(tgt.p.value()).min(tgt.q);
    if ellq_membership(xi, small).lq == Tri::Yes {
        return Verdict::settle(Tri::Yes, Tri::Yes, &rules, trace);
    }
    if ellq_membership(xi, Exponent::Infinity).lq == Tri::No {
        return Verdict::settle(Tri::No, Tri::No, &rules, trace);
    }
    trace.notes.push(format!("xi is bounded but not in l_{small}"));
    Verdict::settle(Tri::Unknown, Tri::Unknown, &rules, trace)
}

/// `b^{s1,φ1}_{p1,q1} → b^{s2,φ2}_{p2,q2}`.
///
/// For `p1 ≥ p2` continuity is decided exactly; compactness is `yes` below `σ` (when
/// `φ2 ≲ φ1`) or below `σ̄` (when `φ2 ≳ φ1`), `no` without continuity or at `s1 = s2`.
/// For `p1 < p2` the two necessary sequences rule out continuity, the same index
/// conditions give compactness, and the limiting embeddings at `s2 = σ` or `s2 = σ̄`
/// give continuity when `q1 ≤ ϱ q2`; everything else is unknown.
pub fn decide_b(src: &SpaceSpec, tgt: &SpaceSpec) -> Result<Verdict> {
    expect_scale(src, &[Scale::B, Scale::Bmo], "decide_b")?;
    expect_scale(tgt, &[Scale::B, Scale::Bmo], "decide_b")?;
    same_dim(src, tgt)?;
    let ctx = context(src, tgt)?;
    let (s1, s2) = (src.s, tgt.s);
    let (q1, q2) = (src.q, tgt.q);
    let r1 = ctx.phi1.rate();
    let r2 = ctx.phi2.rate();
    let ratio = ctx.ratio_rate();
    let mut trace = index_trace(&ctx, s1)?;
    let dom = trace.dominance.unwrap_or(crate::indices::Dominance::Neither);
    let sig = sigma(s1, &ctx.phi1, ctx.rho);
    let sbar = trace.sigma_bar;
    // 2^{j(s2−s1)} φ2/φ1
    let n1 = RateTerm::exp2(s2 - s1).mul(r2.div(r1));
    trace.xi_rate = Some(n1);
    let compact_by_index = (dom.leq() && lt(s2, sig)) || sbar.is_some_and(|sb| lt(s2, sb));

    if ctx.p1 >= ctx.p2 {
        let rules = ["P-Bp-cont", "cor-5.1"];
        if any_low(&[r1, r2]) {
            return Ok(Verdict::unknown(&rules, trace, "low-confidence weight rate"));
        }
        let cond3 = lt(s2, s1) || (eq(s1, s2) && q1.value() <= q2.value());
        let continuous = n1.is_bounded() && cond3;
        let compact = if !continuous || eq(s1, s2) {
            Tri::No
        } else if compact_by_index {
            Tri::Yes
        } else {
            trace.notes.push("compactness not decided between the index condition and continuity".to_string());
            Tri::Unknown
        };
        return Verdict::settle(Tri::from_bool(continuous), compact, &rules, trace);
    }

    let rules = ["P-bp-cont2", "P-bp-cont3", "Lemma-LS_1+2", "cor-5.1"];
    if any_low(&[r1, r2]) {
        return Ok(Verdict::unknown(&rules, trace, "low-confidence weight rate"));
    }
    // 2^{j(s2−s1)} φ1^{ϱ−1}
    let n2 = RateTerm::exp2(s2 - s1).mul(r1.powf(ctx.rho - 1.0));
    if !n1.is_bounded() || !n2.is_bounded() {
        trace.notes.push("a necessary sequence is unbounded".to_string());
        return Verdict::settle(Tri::No, Tri::No, &rules, trace);
    }
    let compact = if compact_by_index {
        Tri::Yes
    } else if eq(s1, s2) {
        Tri::No
    } else {
        Tri::Unknown
    };
    let q_ok = q1.value() <= ctx.rho * q2.value() * (1.0 + 1e-12);
    let lim1 = sign_tol(r1.gamma) != Ordering::Less;
    let lim21 = sign_tol(ratio.gamma) != Ordering::Greater;
    let limiting_leq = dom.leq() && le(s2, sig) && lim1 && q_ok;
    let limiting_geq = sbar.is_some_and(|sb| le(s2, sb)) && lim1 && lim21 && q_ok;
    let continuous = if compact == Tri::Yes || limiting_leq || limiting_geq { Tri::Yes } else { Tri::Unknown };
    Verdict::settle(continuous, compact, &rules, trace)
}

/// `b^{s1,φ}_{p,q} → b^{s2}_{∞,∞}`.
///
/// With `φ(2^{-j}) ≍ 2^{-βj} j^γ` the sequence `2^{j(σ∞−s1)} φ(2^{-j})^{-1}` behaves like
/// `j^{-γ}`: continuity holds iff `s2 < σ∞`, or `s2 = σ∞` and `γ ≥ 0`; compactness iff
/// `s2 < σ∞`, or `s2 = σ∞` and `γ > 0`.
pub fn decide_b_sup_target(src: &SpaceSpec, s2: f64) -> Result<Verdict> {
    expect_scale(src, &[Scale::B, Scale::Bmo], "decide_b_sup_target")?;
    let rules = ["pinfinity"];
    let r = src.phi.rate();
    let si = sigma_inf(src.s, &src.phi);
    let mut trace = Trace { sigma_inf: Some(si), rho: Some(0.0), ..Trace::default() };
    // 2^{j(s2−s1)} φ^{-1}
    trace.xi_rate = Some(RateTerm::exp2(s2 - src.s).mul(r.recip()));
    if r.is_low() {
        return Ok(Verdict::unknown(&rules, trace, "low-confidence weight rate"));
    }
    if lt(s2, si) {
        return Verdict::settle(Tri::Yes, Tri::Yes, &rules, trace);
    }
    if !eq(s2, si) {
        return Verdict::settle(Tri::No, Tri::No, &rules, trace);
    }
    let g = sign_tol(r.gamma);
    if g == Ordering::Less {
        trace.notes.push("sup of 2^{j(sigma_inf-s1)}/phi(2^-j) is infinite at the critical index".to_string());
    }
    Verdict::settle(Tri::from_bool(g != Ordering::Less), Tri::from_bool(g == Ordering::Greater), &rules, trace)
}

/// `M_{φ1,p1} → M_{φ2,p2}`. Never compact. Continuous when `φ1` has a positive limit at
/// zero (the source is `L_∞`) or when `p2 ≤ p1` and `φ2 ≲ φ1`; for `p1, p2 > 1` those
/// conditions are also necessary.
pub fn decide_morrey(src: &SpaceSpec, tgt: &SpaceSpec) -> Result<Verdict> {
    expect_scale(src, &[Scale::M], "decide_morrey")?;
    expect_scale(tgt, &[Scale::M], "decide_morrey")?;
    same_dim(src, tgt)?;
    let (p1, p2) = (src.p.value(), tgt.p.value());
    let ratio = tgt.phi.rate().div(src.phi.rate());
    let mut trace = Trace { xi_rate: Some(ratio), ..Trace::default() };
    if ratio.is_low() {
        trace.notes.push("low-confidence weight rate".to_string());
        return Verdict::settle(Tri::Unknown, Tri::No, &["M-M"], trace);
    }
    if src.phi.has_positive_limit() {
        trace.notes.push("source weight has a positive limit, so the source is L_inf".to_string());
        return Verdict::settle(Tri::Yes, Tri::No, &["M-M", "rem-hoelder-MO"], trace);
    }
    let continuous = if le(p2, p1) && ratio.is_bounded() {
        Tri::Yes
    } else if p1 > 1.0 && p2 > 1.0 {
        Tri::No
    } else {
        Tri::Unknown
    };
    Verdict::settle(continuous, Tri::No, &["M-M"], trace)
}

fn lr_as_morrey(spec: &SpaceSpec) -> Result<SpaceSpec> {
    match spec.p {
        Exponent::Finite(r) => SpaceSpec::m(spec.d, r, Family::Power { u: r }),
        Exponent::Infinity => Err(Error::Unsupported("L_inf against a Morrey space".to_string())),
    }
}

/// The mixed-scale embeddings.
///
/// * `N → B^{s2}_{p2,q2}` is the `ξ` criterion with target weight `t^{d/p2}` (`φ ≡ 1`
///   when `p2 = ∞`, with `ϱ = 0`).
/// * `B^{s1}_{p1,q1} → N` with `p1 < ∞` is the `ξ` criterion with source weight
///   `t^{d/p1}`; with `p1 = ∞` only the sufficient condition `s1 > s2`, or equality and
///   `q1 ≤ q2`, is available.
/// * `N → L_r`: continuous if `{2^{-sj} φ(2^{-j})^{ϱ−1}} ∈ ℓ_{t1}`, not continuous if it
///   leaves `ℓ_{t2}`; compact when `N → B^0_{r,min(r,2)}` is compact.
/// * `B ↔ bmo` is the `B` decision with `bmo = B^{0,1}_{2,2}`.
/// * `M ↔ L_r` is the Morrey decision with `L_r = M_{t^{d/r}, r}`.
pub fn decide_special(src: &SpaceSpec, tgt: &SpaceSpec) -> Result<Verdict> {
    same_dim(src, tgt)?;
    match (src.scale, tgt.scale) {
        (Scale::N, Scale::ClassicalBesov) => n_core(src, tgt, &["cor-N-in-B", "th-cont-BM"]),
        (Scale::ClassicalBesov, Scale::N) => {
            if src.p.is_finite() {
                let mut v = n_core(src, tgt, &["cor-B-in-N", "th-cont-BM"])?;
                v.trace.notes.push("source realised as N with weight t^(d/p1)".to_string());
                return Ok(v);
            }
            let rules = ["cor-B-in-N"];
            let trace = Trace::default();
            let strict = lt(tgt.s, src.s);
            let continuous = strict || (eq(tgt.s, src.s) && src.q.value() <= tgt.q.value());
            let c = if continuous { Tri::Yes } else { Tri::Unknown };
            let k = if strict { Tri::Yes } else { Tri::Unknown };
            let mut v = Verdict::settle(c, k, &rules, trace)?;
            if !continuous {
                v.trace.notes.push("only a sufficient condition is available".to_string());
            }
            Ok(v)
        }
        (Scale::N, Scale::Lr) => decide_n_lr(src, tgt),
        (Scale::B | Scale::Bmo, Scale::B | Scale::Bmo) => {
            let mut v = decide_b(&src.as_b()?, &tgt.as_b()?)?;
            v.push_rule("rembmo");
            Ok(v)
        }
        (Scale::M, Scale::Lr) => {
            let mut v = decide_morrey(src, &lr_as_morrey(tgt)?)?;
            v.push_rule("cor-M-Lr");
            Ok(v)
        }
        (Scale::Lr, Scale::M) => {
            let mut v = decide_morrey(&lr_as_morrey(src)?, tgt)?;
            v.push_rule("cor-M-Lr");
            Ok(v)
        }
        (a, b) => Err(Error::Unsupported(format!("no rule for {} -> {}", a.name(), b.name()))),
    }
}

fn decide_n_lr(src: &SpaceSpec, tgt: &SpaceSpec) -> Result<Verdict> {
    let rules = ["cor-Lr", "cor-N-in-B"];
    let r = tgt.p;
    let p = src.p.value();
    let rho = (p / r.value()).min(1.0);
    let rate = RateTerm::exp2(-src.s).mul(src.phi.rate().powf(rho - 1.0));
    let small = Exponent::Finite(r.value().min(2.0));
    let large = r.max(Exponent::Finite(2.0));
    let t1 = Exponent::from_recip((small.recip() - src.q.recip()).max(0.0));
    let t2 = if r == Exponent::Finite(1.0) {
        Exponent::Infinity
    } else {
        Exponent::from_recip((large.recip() - src.q.recip()).max(0.0))
    };
    let mut trace = Trace { xi_rate: Some(rate), rho: Some(rho), ..Trace::default() };
    trace.notes.push(format!("t1 = {t1}, t2 = {t2}"));
    if rate.is_low() {
        return Ok(Verdict::unknown(&rules, trace, "low-confidence weight rate"));
    }
    let via = SpaceSpec::classical_besov(src.d, 0.0, r, small)?;
    let through_besov = n_core(src, &via, &rules)?;
    let continuous = match (ellq_membership(rate, t1).lq, ellq_membership(rate, t2).lq) {
        (Tri::Yes, _) => Tri::Yes,
        (_, Tri::No) => Tri::No,
        _ => Tri::Unknown,
    };
    let compact = if through_besov.compact == Tri::Yes { Tri::Yes } else { Tri::Unknown };
    Verdict::settle(continuous, compact, &rules, trace)
}

/// Dispatches on the pair of scales.
pub fn decide(src: &SpaceSpec, tgt: &SpaceSpec) -> Result<Verdict> {
    same_dim(src, tgt)?;
    match (src.scale, tgt.scale) {
        (Scale::N, Scale::N) => decide_n(src, tgt),
        (Scale::E, Scale::E) => decide_e(src, tgt),
        (Scale::B, Scale::B) => decide_b(src, tgt),
        (Scale::M, Scale::M) => decide_morrey(src, tgt),
        (Scale::B | Scale::Bmo, Scale::ClassicalBesov) if tgt.p == Exponent::Infinity => {
            if tgt.q != Exponent::Infinity {
                return Err(Error::Unsupported("sup-type targets need q = inf".to_string()));
            }
            decide_b_sup_target(&src.as_b()?, tgt.s)
        }
        (Scale::ClassicalBesov, Scale::ClassicalBesov) => {
            if !(src.p.is_finite() && tgt.p.is_finite()) {
                return Err(Error::Unsupported("classical Besov pairs need finite p".to_string()));
            }
            let mut v = decide_n(&src.as_n()?, &tgt.as_n()?)?;
            v.trace.notes.push("classical Besov spaces realised as N with weights t^(d/p)".to_string());
            Ok(v)
        }
        _ => decide_special(src, tgt),
    }
}
