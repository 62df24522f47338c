//! The sequence `α_j`, critical smoothness indices, dominance of weight pairs and
//! `ℓ_q` membership of log-power sequences.

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::exponent::Exponent;
use crate::phi::PhiSpec;
use crate::rate::{sign_tol, RateTerm};
use crate::seqspace::NormParams;
use crate::tri::Tri;
use std::cmp::Ordering;

/// The quantities shared by every decision about a pair of spaces.
#[derive(Clone, Debug, PartialEq)]
pub struct PairContext {
    pub p1: f64,
    pub p2: f64,
    /// `min(1, p1/p2)`.
    pub rho: f64,
    /// `1/q* = (1/q2 − 1/q1)_+`.
    pub qstar: Exponent,
    pub phi1: PhiSpec,
    pub phi2: PhiSpec,
}

pub fn qstar(q1: Exponent, q2: Exponent) -> Exponent {
    Exponent::from_recip((q2.recip() - q1.recip()).max(0.0))
}

impl PairContext {
    pub fn new(p1: f64, q1: Exponent, phi1: &PhiSpec, p2: f64, q2: Exponent, phi2: &PhiSpec) -> Result<PairContext> {
        if !(p1 > 0.0 && p2 > 0.0) {
            return Err(invalid(format!("integrability indices must be positive, got {p1} and {p2}")));
        }
        if phi1.dim() != phi2.dim() {
            return Err(Error::DimensionMismatch(phi1.dim(), phi2.dim()));
        }
        Ok(PairContext {
            p1,
            p2,
            rho: if p2.is_infinite() { 0.0 } else { (p1 / p2).min(1.0) },
            qstar: qstar(q1, q2),
            phi1: phi1.normalize()?,
            phi2: phi2.normalize()?,
        })
    }

    pub fn from_params(src: &NormParams, tgt: &NormParams) -> Result<PairContext> {
        PairContext::new(src.p, src.q, &src.phi, tgt.p, tgt.q, &tgt.phi)
    }

    pub fn dim(&self) -> u32 {
        self.phi1.dim()
    }

    /// Rate of `φ2(2^{-j}) / φ1(2^{-j})^ϱ`.
    pub fn ratio_rate(&self) -> RateTerm {
        self.phi2.rate().div(self.phi1.rate().powf(self.rho))
    }

    fn ratio_samples(&self, levels: u32) -> Result<Vec<f64>> {
        let a = self.phi1.dyadic_samples(levels)?;
        let b = self.phi2.dyadic_samples(levels)?;
        Ok(a.iter().zip(&b).map(|(x, y)| y / x.powf(self.rho)).collect())
    }

    fn sample_levels(&self, levels: u32) -> u32 {
        [self.phi1.stored_levels(), self.phi2.stored_levels()]
            .into_iter()
            .flatten()
            .fold(levels, u32::min)
    }
}

/// `α_j = max_{0≤ν≤j} φ2(2^{-ν}) / φ1(2^{-ν})^ϱ` for `j = 0..=J`.
pub fn alpha_seq(ctx: &PairContext, levels: u32) -> Result<Vec<f64>> {
    let mut running = 0.0f64;
    Ok(ctx
        .ratio_samples(levels)?
        .into_iter()
        .map(|r| {
            running = running.max(r);
            running
        })
        .collect())
}

/// Rate of `α_j`: the running maximum of the ratio rate.
pub fn alpha_rate(ctx: &PairContext) -> RateTerm {
    ctx.ratio_rate().prefix_sup()
}

/// Rate of `ξ_j = 2^{j(s2−s1)} α_j φ1(2^{-j})^{ϱ−1}`.
pub fn xi_rate(ctx: &PairContext, s1: f64, s2: f64) -> RateTerm {
    RateTerm::exp2(s2 - s1).mul(alpha_rate(ctx)).mul(ctx.phi1.rate().powf(ctx.rho - 1.0))
}

/// `ξ_j` for `j = 0..=J`.
pub fn xi_seq(ctx: &PairContext, s1: f64, s2: f64, levels: u32) -> Result<Vec<f64>> {
    let alpha = alpha_seq(ctx, levels)?;
    let phi1 = ctx.phi1.dyadic_samples(levels)?;
    Ok((0..=levels as usize)
        .map(|j| (j as f64 * (s2 - s1)).exp2() * alpha[j] * phi1[j].powf(ctx.rho - 1.0))
        .collect())
}

/// `σ(s1) = s1 − (1 − ϱ) β1`.
pub fn sigma(s1: f64, phi1: &PhiSpec, rho: f64) -> f64 {
    s1 - (1.0 - rho) * phi1.rate().beta
}

/// `σ∞(s1) = s1 − β1`.
pub fn sigma_inf(s1: f64, phi1: &PhiSpec) -> f64 {
    s1 - phi1.rate().beta
}

/// `σ̄(s1) = σ(s1) + β_r` where `β_r` is the decay exponent of `φ2/φ1^ϱ`. Only defined
/// when that ratio is bounded below.
pub fn sigma_bar(s1: f64, ctx: &PairContext) -> Result<f64> {
    let r = ctx.ratio_rate();
    if !r.is_bounded_below() {
        return Err(Error::Dominance(format!(
            "phi2/phi1^rho decays like 2^(-{} j) j^{}; sigma_bar needs it bounded below",
            r.beta, r.gamma
        )));
    }
    Ok(sigma(s1, &ctx.phi1, ctx.rho) + r.beta)
}

/// A closed interval reported by the sample-based estimators.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// Decides `x < boundary` for every point of the interval; `Unknown` when the
    /// interval straddles the boundary.
    pub fn lt(&self, boundary: f64) -> Tri {
        if self.hi < boundary {
            Tri::Yes
        } else if self.lo >= boundary {
            Tri::No
        } else {
            Tri::Unknown
        }
    }

    fn affine(self, a: f64, b: f64) -> Interval {
        let (x, y) = (a * self.lo + b, a * self.hi + b);
        Interval { lo: x.min(y), hi: x.max(y) }
    }
}

fn ls_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Decay exponent `β` of `φ(2^{-j})` estimated from samples: least-squares slopes of
/// `log2 φ(2^{-j})` against `j` over the last half of `0..=J` and over its two
/// quarters. Returns the hull of the three estimates of `β`.
pub fn numeric_beta(phi: &PhiSpec, levels: u32) -> Result<Interval> {
    let levels = phi.stored_levels().map_or(levels, |s| s.min(levels));
    if levels < 8 {
        return Err(invalid("slope estimation needs at least 8 levels"));
    }
    let samples = phi.dyadic_samples(levels)?;
    let fit = |a: usize, b: usize| {
        let xs: Vec<f64> = (a..=b).map(|j| j as f64).collect();
        let ys: Vec<f64> = (a..=b).map(|j| samples[j].log2()).collect();
        -ls_slope(&xs, &ys)
    };
    let n = levels as usize;
    let est = [fit(n / 2, n), fit(n / 2, 3 * n / 4), fit(3 * n / 4, n)];
    Ok(Interval {
        lo: est.iter().copied().fold(f64::INFINITY, f64::min),
        hi: est.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    })
}

/// Sample-based `σ(s1)`.
pub fn sigma_numeric(s1: f64, phi1: &PhiSpec, rho: f64, levels: u32) -> Result<Interval> {
    Ok(numeric_beta(phi1, levels)?.affine(-(1.0 - rho), s1))
}

/// Sample-based `σ∞(s1)`.
pub fn sigma_inf_numeric(s1: f64, phi1: &PhiSpec, levels: u32) -> Result<Interval> {
    Ok(numeric_beta(phi1, levels)?.affine(-1.0, s1))
}

/// Sample-based `σ̄(s1)`: the decay of `φ2/φ1^ϱ` is `β2 − ϱ β1`, estimated through both
/// weights separately.
pub fn sigma_bar_numeric(s1: f64, ctx: &PairContext, levels: u32) -> Result<Interval> {
    let b1 = numeric_beta(&ctx.phi1, levels)?;
    let b2 = numeric_beta(&ctx.phi2, levels)?;
    // s1 − (1−ϱ)β1 + β2 − ϱβ1 = s1 − β1 + β2
    Ok(Interval { lo: s1 - b1.hi + b2.lo, hi: s1 - b1.lo + b2.hi })
}

/// How `φ2` compares with `φ1^ϱ` near zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Dominance {
    /// `φ2 ≤ C φ1^ϱ`.
    Leq,
    /// `φ2 ≥ c φ1^ϱ`.
    Geq,
    Both,
    Neither,
}

impl Dominance {
    pub fn leq(self) -> bool {
        matches!(self, Dominance::Leq | Dominance::Both)
    }

    pub fn geq(self) -> bool {
        matches!(self, Dominance::Geq | Dominance::Both)
    }

    fn from_flags(leq: bool, geq: bool) -> Dominance {
        match (leq, geq) {
            (true, true) => Dominance::Both,
            (true, false) => Dominance::Leq,
            (false, true) => Dominance::Geq,
            (false, false) => Dominance::Neither,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DominanceReport {
    pub class: Dominance,
    /// `max_j φ2/φ1^ϱ` on the sampled levels (the constant `C` of `leq`).
    pub upper: f64,
    /// `min_j φ2/φ1^ϱ` on the sampled levels (the constant `c` of `geq`).
    pub lower: f64,
    /// Set when the rate of either weight was only asserted or flagged low.
    pub asserted: bool,
}

/// Tail growth tolerated by the sample check before a bound is rejected.
const SAMPLE_SLACK: f64 = 2.0;

/// Classifies `φ2(2^{-j}) / φ1(2^{-j})^ϱ`. The class follows from the ratio rate; for
/// asserted rates the samples on `0..=J` must agree, and a bound contradicted by the
/// samples (the tail exceeding the head by more than a factor of two) is dropped.
pub fn dominance_check(ctx: &PairContext, levels: u32) -> Result<DominanceReport> {
    if levels < 2 {
        return Err(invalid("dominance_check needs J >= 2"));
    }
    let levels = ctx.sample_levels(levels);
    let r = ctx.ratio_rate();
    let samples = ctx.ratio_samples(levels)?;
    let upper = samples.iter().copied().fold(0.0, f64::max);
    let lower = samples.iter().copied().fold(f64::INFINITY, f64::min);
    let mut leq = r.is_bounded();
    let mut geq = r.is_bounded_below();
    let asserted = r.confidence != crate::rate::Confidence::Exact;
    if asserted && samples.len() >= 4 {
        let half = samples.len() / 2;
        let (head, tail) = samples.split_at(half);
        let head_max = head.iter().copied().fold(0.0, f64::max);
        let head_min = head.iter().copied().fold(f64::INFINITY, f64::min);
        let tail_max = tail.iter().copied().fold(0.0, f64::max);
        let tail_min = tail.iter().copied().fold(f64::INFINITY, f64::min);
        leq &= tail_max <= SAMPLE_SLACK * head_max;
        geq &= tail_min >= head_min / SAMPLE_SLACK;
    }
    Ok(DominanceReport { class: Dominance::from_flags(leq, geq), upper, lower, asserted })
}

/// Membership of a sequence `≍ 2^{-βj} j^γ` in `ℓ_q` and in `c_0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Membership {
    pub lq: Tri,
    pub c0: Tri,
}

/// `ℓ_q` and `c_0` membership of a rate. At `β = 0` a finite `q` needs `γ < −1/q`
/// (the borderline `γ = −1/q` diverges like the harmonic series), `q = ∞` needs
/// `γ ≤ 0` and `c_0` needs `γ < 0`.
pub fn ellq_membership(rate: RateTerm, q: Exponent) -> Membership {
    if rate.is_low() {
        return Membership { lq: Tri::Unknown, c0: Tri::Unknown };
    }
    match sign_tol(rate.beta) {
        Ordering::Greater => Membership { lq: Tri::Yes, c0: Tri::Yes },
        Ordering::Less => Membership { lq: Tri::No, c0: Tri::No },
        Ordering::Equal => {
            let lq = match q {
                Exponent::Finite(q) => sign_tol(rate.gamma + 1.0 / q) == Ordering::Less,
                Exponent::Infinity => sign_tol(rate.gamma) != Ordering::Greater,
            };
            Membership { lq: Tri::from_bool(lq), c0: Tri::from_bool(sign_tol(rate.gamma) == Ordering::Less) }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phi::Family;
    use crate::rate::Confidence;

    fn phi(f: Family, d: u32) -> PhiSpec {
        PhiSpec::normalized(f, d).unwrap()
    }

    fn ctx(p1: f64, f1: Family, p2: f64, f2: Family, d: u32) -> PairContext {
        let inf = Exponent::Infinity;
        PairContext::new(p1, inf, &phi(f1, d), p2, inf, &phi(f2, d)).unwrap()
    }

    #[test]
    fn qstar_cases() {
        use Exponent::*;
        assert_eq!(qstar(Finite(1.0), Finite(2.0)), Infinity);
        assert_eq!(qstar(Finite(2.0), Finite(2.0)), Infinity);
        assert_eq!(qstar(Finite(2.0), Finite(1.0)), Finite(2.0));
        assert_eq!(qstar(Infinity, Finite(2.0)), Finite(2.0));
    }

    #[test]
    fn alpha_classical() {
        // ϱ/u1 ≤ 1/u2: all ones
        let c = ctx(1.0, Family::Power { u: 2.0 }, 2.0, Family::Power { u: 2.0 }, 1);
        assert!(alpha_seq(&c, 20).unwrap().iter().all(|a| (a - 1.0).abs() < 1e-15));
        assert_eq!(alpha_rate(&c), RateTerm::ONE);
        // ϱ/u1 > 1/u2: 2^{jd(ϱ/u1 − 1/u2)}
        let c = ctx(2.0, Family::Power { u: 2.0 }, 2.0, Family::Power { u: 4.0 }, 2);
        let a = alpha_seq(&c, 10).unwrap();
        for (j, v) in a.iter().enumerate() {
            let expected = (j as f64 * 2.0 * (0.5 - 0.25)).exp2();
            assert!((v / expected - 1.0).abs() < 1e-13);
        }
        assert_eq!(alpha_rate(&c), RateTerm::new(-0.5, 0.0));
    }

    #[test]
    fn sigma_examples() {
        let inv = phi(Family::InvLog { a: 3.0 }, 1);
        assert_eq!(sigma(0.7, &inv, 0.5), 0.7);
        assert_eq!(sigma_inf(0.7, &inv), 0.7);
        let psi = phi(Family::PsiCritical { p: 1.0 }, 2);
        assert_eq!(sigma_inf(1.0, &psi), -1.0);
        assert_eq!(sigma(1.3, &psi, 1.0), 1.3);
    }

    #[test]
    fn sigma_bar_needs_lower_bound() {
        // φ1 ≡ 1, φ2 = t^{d/p2}: the ratio decays, so σ̄ is undefined
        let c = ctx(1.0, Family::Constant, 2.0, Family::Power { u: 2.0 }, 1);
        assert!(matches!(sigma_bar(0.0, &c), Err(Error::Dominance(_))));
        let same = ctx(2.0, Family::Power { u: 2.0 }, 2.0, Family::Power { u: 2.0 }, 1);
        assert_eq!(sigma_bar(0.4, &same).unwrap(), sigma(0.4, &same.phi1, 1.0));
    }

    #[test]
    fn dominance_examples() {
        let c = ctx(2.0, Family::PsiCritical { p: 2.0 }, 2.0, Family::PsiCritical { p: 2.0 }, 2);
        assert_eq!(dominance_check(&c, 30).unwrap().class, Dominance::Both);
        // ratio t^{d/p2} / (t^{d/p1} ln(1/t))^ϱ with ϱ = p1/p2 behaves like j^{-ϱ}
        let c = ctx(1.0, Family::PsiCritical { p: 1.0 }, 2.0, Family::Power { u: 2.0 }, 1);
        assert_eq!(c.ratio_rate(), RateTerm::new(0.0, -0.5));
        assert_eq!(dominance_check(&c, 30).unwrap().class, Dominance::Leq);
    }

    #[test]
    fn tabulated_contradiction_is_neither() {
        // samples grow past the asserted bound
        let samples: Vec<f64> = (0..=20).map(|j| if j < 10 { 1.0 } else { 0.05 }).collect();
        let bad = PhiSpec::normalized(
            Family::Tabulated { samples, rate: RateTerm::new(0.0, 0.0) },
            1,
        )
        .unwrap();
        let one = phi(Family::Constant, 1);
        let inf = Exponent::Infinity;
        let c = PairContext::new(1.0, inf, &bad, 1.0, inf, &one).unwrap();
        let r = dominance_check(&c, 20).unwrap();
        assert!(r.asserted);
        assert_eq!(r.class, Dominance::Geq);
        let c = PairContext::new(1.0, inf, &one, 1.0, inf, &bad).unwrap();
        assert_eq!(dominance_check(&c, 20).unwrap().class, Dominance::Leq);
        let wiggle: Vec<f64> = (0..=20).map(|j| if j < 10 { 1.0 } else { [0.2, 3.0][j % 2] }).collect();
        let w = PhiSpec::normalized(
            Family::Tabulated { samples: wiggle, rate: RateTerm::new(0.0, 0.0) },
            1,
        )
        .unwrap();
        let c = PairContext::new(1.0, inf, &one, 1.0, inf, &w).unwrap();
        assert_eq!(dominance_check(&c, 20).unwrap().class, Dominance::Neither);
    }

    #[test]
    fn membership_examples() {
        let m = ellq_membership(RateTerm::new(0.25, 0.0), Exponent::Infinity);
        assert_eq!((m.lq, m.c0), (Tri::Yes, Tri::Yes));
        let m = ellq_membership(RateTerm::ONE, Exponent::Infinity);
        assert_eq!((m.lq, m.c0), (Tri::Yes, Tri::No));
        assert_eq!(ellq_membership(RateTerm::new(0.0, -1.0), Exponent::Finite(2.0)).lq, Tri::Yes);
        assert_eq!(ellq_membership(RateTerm::new(0.0, -0.5), Exponent::Finite(2.0)).lq, Tri::No);
        assert_eq!(ellq_membership(RateTerm::new(-0.1, -9.0), Exponent::Finite(2.0)).lq, Tri::No);
        let low = RateTerm::new(1.0, 0.0).with_confidence(Confidence::Low);
        assert_eq!(ellq_membership(low, Exponent::Infinity).lq, Tri::Unknown);
    }

    #[test]
    fn numeric_slopes_track_rates() {
        for (f, d) in [
            (Family::Power { u: 2.0 }, 1),
            (Family::PsiCritical { p: 1.0 }, 2),
            (Family::InvLog { a: 5.0 }, 1),
            (Family::LogBlend, 1),
            (Family::PowerLog { p: 2.0, a: -1.0, l: 3.0 }, 1),
        ] {
            let p = phi(f, d);
            let iv = numeric_beta(&p, 200).unwrap();
            let beta = p.rate().beta;
            assert!(iv.lo - 0.05 <= beta && beta <= iv.hi + 0.05, "{} {:?}", p.label(), iv);
            assert!(iv.hi - iv.lo < 0.05);
        }
    }
}
