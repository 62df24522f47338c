//! Weight functions `φ` of the Morrey class `G_p`.
//!
//! `φ ∈ G_p` means `φ` is non-decreasing and `t^{-d/p} φ(t)` is non-increasing on
//! `(0, ∞)`. The sequence-space results only consume the dyadic samples `φ(2^{-j})`
//! together with their asymptotic class as `j → ∞`, so every weight here carries a
//! [`RateTerm`] next to its evaluator.

use std::f64::consts::{E, LN_2};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::exponent::Exponent;
use crate::rate::{Confidence, RateTerm, RATE_TOL};

/// Symbolic weight families plus a tabulated escape hatch.
///
/// The dimension `d` is not part of the family; it is supplied when a [`PhiSpec`] is
/// built.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    /// `t^{d/u}`.
    Power { u: f64 },
    /// `t^{d/u}` for `t ≤ 1` and `t^{d/v}` for `t > 1`; either index may be `"inf"`.
    PiecewisePower { u: Exponent, v: Exponent },
    /// `t^{d/p} (ln(L + t))^a` with `a ≤ 0` and `L > 1`.
    PowerLog {
        p: f64,
        a: f64,
        #[serde(rename = "L", alias = "l")]
        l: f64,
    },
    /// `ln(1 + t)/ln 2` for `t < 1` and `t` for `t ≥ 1`.
    LogBlend,
    /// `ln a / ln(1/t)` for `t < 1/a` and `1` otherwise, `a ≥ e`.
    InvLog { a: f64 },
    /// `(e t)^{d/p} ln(1/t)` for `t < 1/e` and `1` otherwise.
    PsiCritical { p: f64 },
    /// `φ ≡ 1`.
    Constant,
    /// Samples `φ(2^{-j})`, `j = 0..=J`, with a user-supplied rate.
    Tabulated { samples: Vec<f64>, rate: RateTerm },
    /// `∏ φ_i^{e_i}`.
    Product { factors: Vec<Factor> },
}

/// One factor `φ_i^{e_i}` of a [`Family::Product`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Factor {
    pub phi: Family,
    pub exponent: f64,
}

impl Family {
    fn validate(&self) -> Result<()> {
        let pos = |name: &str, x: f64| {
            if x.is_finite() && x > 0.0 {
                Ok(())
            } else {
                Err(invalid(format!("{name} must be positive and finite, got {x}")))
            }
        };
        match self {
            Family::Power { u } => pos("u", *u),
            Family::PiecewisePower { u, v } => {
                if u.is_valid() && v.is_valid() {
                    Ok(())
                } else {
                    Err(invalid("piecewise power indices must lie in (0, inf]"))
                }
            }
            Family::PowerLog { p, a, l } => {
                pos("p", *p)?;
                if !(a.is_finite() && *a <= 0.0) {
                    return Err(invalid(format!("power-log exponent a must be <= 0, got {a}")));
                }
                if !(l.is_finite() && *l > 1.0) {
                    return Err(invalid(format!("power-log constant L must exceed 1, got {l}")));
                }
                Ok(())
            }
            Family::LogBlend | Family::Constant => Ok(()),
            Family::InvLog { a } => {
                if a.is_finite() && *a >= E * (1.0 - 1e-15) {
                    Ok(())
                } else {
                    Err(invalid(format!("inverse-log parameter a must be >= e, got {a}")))
                }
            }
            Family::PsiCritical { p } => pos("p", *p),
            Family::Tabulated { samples, rate } => {
                if samples.is_empty() {
                    return Err(invalid("tabulated weight needs at least one sample"));
                }
                if let Some(x) = samples.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
                    return Err(invalid(format!("tabulated samples must be positive, got {x}")));
                }
                if !(rate.beta.is_finite() && rate.gamma.is_finite()) {
                    return Err(invalid("tabulated rate must be finite"));
                }
                Ok(())
            }
            Family::Product { factors } => {
                if factors.is_empty() {
                    return Err(invalid("product weight needs at least one factor"));
                }
                for f in factors {
                    if !f.exponent.is_finite() {
                        return Err(invalid("product exponents must be finite"));
                    }
                    f.phi.validate()?;
                }
                Ok(())
            }
        }
    }

    fn raw_eval(&self, t: f64, d: u32) -> Result<f64> {
        let df = f64::from(d);
        Ok(match self {
            Family::Power { u } => t.powf(df / u),
            Family::PiecewisePower { u, v } => {
                let idx = if t <= 1.0 { u } else { v };
                t.powf(df * idx.recip())
            }
            Family::PowerLog { p, a, l } => t.powf(df / p) * (l + t).ln().powf(*a),
            Family::LogBlend => {
                if t < 1.0 {
                    t.ln_1p() / LN_2
                } else {
                    t
                }
            }
            Family::InvLog { a } => {
                if t < 1.0 / a {
                    a.ln() / (-t.ln())
                } else {
                    1.0
                }
            }
            Family::PsiCritical { p } => {
                if t < 1.0 / E {
                    (E * t).powf(df / p) * (-t.ln())
                } else {
                    1.0
                }
            }
            Family::Constant => 1.0,
            Family::Tabulated { samples, .. } => {
                let j = dyadic_level(t).ok_or(Error::TabulatedPoint(t))?;
                *samples
                    .get(j as usize)
                    .ok_or(Error::TabulatedRange { level: j, stored: samples.len() as u32 - 1 })?
            }
            Family::Product { factors } => {
                let mut acc = 1.0;
                for f in factors {
                    acc *= f.phi.raw_eval(t, d)?.powf(f.exponent);
                }
                acc
            }
        })
    }

    fn rate(&self, d: u32) -> RateTerm {
        let df = f64::from(d);
        match self {
            Family::Power { u } => RateTerm::new(df / u, 0.0),
            Family::PiecewisePower { u, .. } => RateTerm::new(df * u.recip(), 0.0),
            Family::PowerLog { p, .. } => RateTerm::new(df / p, 0.0),
            Family::LogBlend => RateTerm::new(1.0, 0.0),
            Family::InvLog { .. } => RateTerm::new(0.0, -1.0),
            Family::PsiCritical { p } => RateTerm::new(df / p, 1.0),
            Family::Constant => RateTerm::ONE,
            Family::Tabulated { rate, .. } => *rate,
            Family::Product { factors } => factors
                .iter()
                .fold(RateTerm::ONE, |acc, f| acc.mul(f.phi.rate(d).powf(f.exponent))),
        }
    }

    fn stored_levels(&self) -> Option<u32> {
        match self {
            Family::Tabulated { samples, .. } => Some(samples.len() as u32 - 1),
            Family::Product { factors } => factors.iter().filter_map(|f| f.phi.stored_levels()).min(),
            _ => None,
        }
    }

    fn dyadic_only(&self) -> bool {
        self.stored_levels().is_some()
    }

    /// Short human-readable name used in traces and reports.
    pub fn label(&self) -> String {
        match self {
            Family::Power { u } => format!("power(u={u})"),
            Family::PiecewisePower { u, v } => format!("piecewise_power(u={u},v={v})"),
            Family::PowerLog { p, a, l } => format!("power_log(p={p},a={a},L={l})"),
            Family::LogBlend => "log_blend".to_string(),
            Family::InvLog { a } => format!("inv_log(a={a})"),
            Family::PsiCritical { p } => format!("psi_critical(p={p})"),
            Family::Constant => "constant".to_string(),
            Family::Tabulated { samples, .. } => format!("tabulated(J={})", samples.len() - 1),
            Family::Product { factors } => {
                let parts: Vec<String> =
                    factors.iter().map(|f| format!("{}^{}", f.phi.label(), f.exponent)).collect();
                parts.join("*")
            }
        }
    }
}

/// Returns `j` when `t = 2^{-j}` for some `j ≥ 0`.
fn dyadic_level(t: f64) -> Option<u32> {
    if !(t > 0.0 && t <= 1.0) {
        return None;
    }
    let j = (-t.log2()).round();
    if !(0.0..=1074.0).contains(&j) {
        return None;
    }
    let j = j as i32;
    let back = 2f64.powi(-j);
    ((back - t).abs() <= 1e-12 * t).then_some(j as u32)
}

/// A weight function in a fixed dimension, optionally normalized to `φ(1) = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhiSpec {
    family: Family,
    d: u32,
    /// `φ(1)` of the raw family; evaluations are divided by it once normalized.
    norm: f64,
    normalized: bool,
}

impl PhiSpec {
    /// Validate the family parameters. Tabulated rates without an explicit confidence
    /// are recorded as asserted.
    pub fn new(family: Family, d: u32) -> Result<PhiSpec> {
        if d == 0 {
            return Err(invalid("dimension d must be positive"));
        }
        family.validate()?;
        let family = mark_asserted(family);
        Ok(PhiSpec { family, d, norm: 1.0, normalized: false })
    }

    /// [`PhiSpec::new`] followed by [`PhiSpec::normalize`].
    pub fn normalized(family: Family, d: u32) -> Result<PhiSpec> {
        PhiSpec::new(family, d)?.normalize()
    }

    /// Rescale so that `φ(1) = 1` exactly. Tabulated samples are divided by the first
    /// sample; the rate is unchanged.
    pub fn normalize(&self) -> Result<PhiSpec> {
        if self.normalized {
            return Ok(self.clone());
        }
        if let Family::Tabulated { samples, rate } = &self.family {
            let s0 = samples[0];
            let samples = samples.iter().map(|x| x / s0).collect();
            return Ok(PhiSpec {
                family: Family::Tabulated { samples, rate: *rate },
                d: self.d,
                norm: 1.0,
                normalized: true,
            });
        }
        let one = self.family.raw_eval(1.0, self.d)?;
        if !(one.is_finite() && one > 0.0) {
            return Err(invalid(format!("phi(1) must be finite and positive, got {one}")));
        }
        Ok(PhiSpec { family: self.family.clone(), d: self.d, norm: one, normalized: true })
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn dim(&self) -> u32 {
        self.d
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Highest stored level for tabulated weights (or products containing one).
    pub fn stored_levels(&self) -> Option<u32> {
        self.family.stored_levels()
    }

    /// `φ(t)` for `t > 0`. Tabulated weights only accept `t = 2^{-j}`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(t.is_finite() && t > 0.0) {
            return Err(invalid(format!("phi is evaluated at t > 0 only, got {t}")));
        }
        Ok(self.family.raw_eval(t, self.d)? / self.norm)
    }

    /// `φ(2^{-j})`.
    pub fn eval_level(&self, j: u32) -> Result<f64> {
        if let Family::Tabulated { samples, .. } = &self.family {
            return samples
                .get(j as usize)
                .map(|x| x / self.norm)
                .ok_or(Error::TabulatedRange { level: j, stored: samples.len() as u32 - 1 });
        }
        self.eval(2f64.powi(-(j as i32)))
    }

    /// `φ(2^{k})` for coarse scales `k ≥ 0`; `None` when the weight is only known at
    /// dyadic points of `(0, 1]`.
    pub fn eval_coarse(&self, k: u32) -> Option<f64> {
        if self.family.dyadic_only() {
            return if k == 0 { self.eval_level(0).ok() } else { None };
        }
        self.eval(2f64.powi(k as i32)).ok()
    }

    /// `[φ(2^0), φ(2^{-1}), …, φ(2^{-J})]`.
    pub fn dyadic_samples(&self, levels: u32) -> Result<Vec<f64>> {
        (0..=levels).map(|j| self.eval_level(j)).collect()
    }

    /// Asymptotic class of `φ(2^{-j})` as `j → ∞`.
    pub fn rate(&self) -> RateTerm {
        self.family.rate(self.d)
    }

    /// `lim_{t→0} φ(t) > 0`, decided from the rate.
    pub fn has_positive_limit(&self) -> bool {
        let r = self.rate();
        !r.is_low() && r.is_constant()
    }

    pub fn label(&self) -> String {
        self.family.label()
    }

    /// `φ_1^{e_1} φ_2^{e_2}` as a product weight (used for interpolated weights). The
    /// factors' normalizations combine into the product's, so the result evaluates to
    /// exactly `∏ φ_i^{e_i}`.
    pub fn product(parts: &[(&PhiSpec, f64)]) -> Result<PhiSpec> {
        let d = parts.first().map(|(p, _)| p.d).ok_or_else(|| invalid("empty product"))?;
        if let Some((p, _)) = parts.iter().find(|(p, _)| p.d != d) {
            return Err(Error::DimensionMismatch(d, p.d));
        }
        let factors = parts.iter().map(|(p, e)| Factor { phi: p.family.clone(), exponent: *e }).collect();
        let norm = parts.iter().map(|(p, e)| p.norm.powf(*e)).product();
        let spec = PhiSpec::new(Family::Product { factors }, d)?;
        Ok(PhiSpec { norm, normalized: parts.iter().all(|(p, _)| p.normalized), ..spec })
    }
}

fn mark_asserted(family: Family) -> Family {
    match family {
        Family::Tabulated { samples, mut rate } => {
            if rate.confidence == Confidence::Exact {
                rate.confidence = Confidence::Asserted;
            }
            Family::Tabulated { samples, rate }
        }
        Family::Product { factors } => Family::Product {
            factors: factors
                .into_iter()
                .map(|f| Factor { phi: mark_asserted(f.phi), exponent: f.exponent })
                .collect(),
        },
        other => other,
    }
}

/// Outcome of the dyadic `G_p` check.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GpReport {
    pub monotone_ok: bool,
    pub gp_ok: bool,
    /// First level `j` at which either condition breaks between `j` and `j + 1`.
    pub first_violation_level: Option<u32>,
    /// Number of levels actually checked (tabulated weights stop at their last sample).
    pub levels_checked: u32,
}

impl GpReport {
    pub fn ok(&self) -> bool {
        self.monotone_ok && self.gp_ok
    }
}

const GP_REL_TOL: f64 = 1e-12;

/// Dyadic `G_p` check on `j = 0..=J`: `φ(2^{-j})` non-increasing in `j` and
/// `2^{jd/p} φ(2^{-j})` non-decreasing in `j`.
pub fn validate_gp(phi: &PhiSpec, p: f64, levels: u32) -> Result<GpReport> {
    if !(p > 0.0) {
        return Err(invalid(format!("p must be positive, got {p}")));
    }
    if levels < 2 {
        return Err(invalid("validate_gp needs J >= 2"));
    }
    let levels = phi.stored_levels().map_or(levels, |s| s.min(levels));
    let samples = phi.dyadic_samples(levels)?;
    let dp = f64::from(phi.dim()) / p;
    let mut report =
        GpReport { monotone_ok: true, gp_ok: true, first_violation_level: None, levels_checked: levels };
    for j in 0..levels as usize {
        let (a, b) = (samples[j], samples[j + 1]);
        let mono = b <= a * (1.0 + GP_REL_TOL);
        // 2^{(j+1)d/p} b >= 2^{jd/p} a  <=>  b * 2^{d/p} >= a
        let gp = b * dp.exp2() >= a * (1.0 - GP_REL_TOL);
        if !mono {
            report.monotone_ok = false;
        }
        if !gp {
            report.gp_ok = false;
        }
        if (!mono || !gp) && report.first_violation_level.is_none() {
            report.first_violation_level = Some(j as u32);
        }
    }
    Ok(report)
}

/// Outcome of the dyadic check of `t^ε/φ(t) ≤ C r^ε/φ(r)` for `t ≥ r`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IntcReport {
    pub holds: bool,
    /// Smallest `C` that works on the sampled levels.
    pub constant: f64,
    /// Set for tabulated weights: nothing is known past the stored samples.
    pub inconclusive_beyond_j: bool,
}

/// Checks the condition that makes the Triebel-Lizorkin-Morrey scale well defined:
/// `φ(t) t^{-ε}` is almost increasing.
///
/// With `g_j = 2^{-jε}/φ(2^{-j})` the condition reads `g_i ≤ C g_j` for `i ≤ j`. The
/// reported constant is the largest observed `max_{i≤j} g_i / g_j`; whether it stays
/// bounded as `J → ∞` is read off the rate: it does iff `β > ε`, or `β = ε` with
/// `γ ≤ 0`.
pub fn validate_intc(phi: &PhiSpec, eps: f64, levels: u32) -> Result<IntcReport> {
    if !(eps > 0.0) {
        return Err(invalid(format!("epsilon must be positive, got {eps}")));
    }
    let levels = phi.stored_levels().map_or(levels, |s| s.min(levels));
    let samples = phi.dyadic_samples(levels)?;
    let mut running = 0.0f64;
    let mut constant = 1.0f64;
    for (j, s) in samples.iter().enumerate() {
        let g = (-(j as f64) * eps).exp2() / s;
        running = running.max(g);
        constant = constant.max(running / g);
    }
    let r = phi.rate();
    let holds = !r.is_low()
        && (r.beta > eps + RATE_TOL || ((r.beta - eps).abs() <= RATE_TOL && r.gamma <= RATE_TOL));
    Ok(IntcReport { holds, constant, inconclusive_beyond_j: phi.stored_levels().is_some() })
}

/// Candidate values of `ε` tried by [`smallest_intc_epsilon`], in increasing order.
pub const INTC_EPSILON_LADDER: [f64; 8] = [1e-3, 1e-2, 0.05, 0.1, 0.25, 0.5, 1.0, 2.0];

/// Smallest `ε` on [`INTC_EPSILON_LADDER`] for which [`validate_intc`] holds.
pub fn smallest_intc_epsilon(phi: &PhiSpec, levels: u32) -> Result<Option<f64>> {
    for eps in INTC_EPSILON_LADDER {
        if validate_intc(phi, eps, levels)?.holds {
            return Ok(Some(eps));
        }
    }
    Ok(None)
}

/// Asymptotic class of `φ(2^{-j})`.
pub fn rate_at_zero(phi: &PhiSpec) -> RateTerm {
    phi.rate()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(f: Family, d: u32) -> PhiSpec {
        PhiSpec::normalized(f, d).unwrap()
    }

    #[test]
    fn eval_examples() {
        assert_eq!(spec(Family::Power { u: 1.0 }, 1).eval(0.5).unwrap(), 0.5);
        assert_eq!(spec(Family::LogBlend, 1).eval(1.0).unwrap(), 1.0);
        let v = spec(Family::InvLog { a: E }, 1).eval((-2.0f64).exp()).unwrap();
        assert!((v - 0.5).abs() < 1e-15);
    }

    #[test]
    fn eval_rejects_bad_points() {
        let p = spec(Family::Power { u: 1.0 }, 1);
        assert!(p.eval(0.0).is_err());
        assert!(p.eval(-1.0).is_err());
        let t = spec(Family::Tabulated { samples: vec![1.0, 0.5, 0.25], rate: RateTerm::new(1.0, 0.0) }, 1);
        assert_eq!(t.eval(0.25).unwrap(), 0.25);
        assert!(matches!(t.eval(0.3), Err(Error::TabulatedPoint(_))));
        assert!(matches!(t.eval(0.125), Err(Error::TabulatedRange { .. })));
    }

    #[test]
    fn normalization() {
        let raw = PhiSpec::new(Family::PowerLog { p: 1.0, a: -1.0, l: 2.0 }, 1).unwrap();
        let expected = 1.0 / 3f64.ln();
        assert!((raw.eval(1.0).unwrap() - expected).abs() < 1e-15);
        let n = raw.normalize().unwrap();
        assert_eq!(n.eval(1.0).unwrap(), 1.0);
        assert!((n.eval(0.5).unwrap() - raw.eval(0.5).unwrap() / expected).abs() < 1e-15);
        assert_eq!(n.rate(), raw.rate());

        let t = spec(Family::Tabulated { samples: vec![7.0, 3.5, 1.75], rate: RateTerm::new(1.0, 0.0) }, 1);
        assert_eq!(t.dyadic_samples(2).unwrap(), vec![1.0, 0.5, 0.25]);
    }

    #[test]
    fn samples_examples() {
        assert_eq!(spec(Family::Power { u: 1.0 }, 1).dyadic_samples(2).unwrap(), vec![1.0, 0.5, 0.25]);
        let lb = spec(Family::LogBlend, 1).dyadic_samples(1).unwrap();
        assert_eq!(lb[0], 1.0);
        assert!((lb[1] - 0.584962500721156).abs() < 1e-12);
    }

    #[test]
    fn rates() {
        assert_eq!(spec(Family::Power { u: 4.0 }, 2).rate(), RateTerm::new(0.5, 0.0));
        assert_eq!(spec(Family::InvLog { a: E }, 1).rate(), RateTerm::new(0.0, -1.0));
        assert_eq!(spec(Family::PsiCritical { p: 1.0 }, 2).rate(), RateTerm::new(2.0, 1.0));
        assert_eq!(spec(Family::LogBlend, 3).rate(), RateTerm::new(1.0, 0.0));
        let t = spec(Family::Tabulated { samples: vec![1.0], rate: RateTerm::new(0.3, 0.0) }, 1);
        assert_eq!(t.rate().confidence, Confidence::Asserted);
    }

    #[test]
    fn gp_examples() {
        let p = spec(Family::Power { u: 2.0 }, 1);
        assert!(validate_gp(&p, 2.0, 40).unwrap().ok());
        assert!(validate_gp(&p, 1.0, 40).unwrap().ok());
        // t^{d/u} with d/u = 1 > d/p = 1/2
        let steep = spec(Family::Power { u: 1.0 }, 1);
        let r = validate_gp(&steep, 2.0, 10).unwrap();
        assert!(r.monotone_ok && !r.gp_ok);
        assert_eq!(r.first_violation_level, Some(0));
        // t^u / ln(e + t) with u = 0.05
        let bad = spec(Family::PowerLog { p: 20.0, a: -1.0, l: E }, 1);
        assert!(!validate_gp(&bad, 1.0, 20).unwrap().monotone_ok);
        assert!(validate_gp(&p, 0.0, 10).is_err());
    }

    #[test]
    fn inv_log_class() {
        let a = 20.0f64;
        let phi = spec(Family::InvLog { a }, 1);
        assert!(validate_gp(&phi, a.ln(), 200).unwrap().ok());
        assert!(!validate_gp(&phi, 2.0 * a.ln(), 200).unwrap().gp_ok);
    }

    #[test]
    fn intc() {
        let p = spec(Family::Power { u: 2.0 }, 2);
        assert!(validate_intc(&p, 0.5, 30).unwrap().holds);
        assert!(!validate_intc(&p, 1.5, 30).unwrap().holds);
        // t^ε/φ(t) must not blow up relative to smaller r: fails for φ ≡ 1 and for
        // the inverse logarithm, whose t^{-ε}φ(t) decreases near 0.
        assert!(!validate_intc(&spec(Family::Constant, 1), 0.1, 30).unwrap().holds);
        assert!(!validate_intc(&spec(Family::InvLog { a: E }, 1), 0.1, 30).unwrap().holds);
        assert_eq!(smallest_intc_epsilon(&p, 30).unwrap(), Some(1e-3));
        assert_eq!(smallest_intc_epsilon(&spec(Family::Constant, 1), 30).unwrap(), None);
    }

    #[test]
    fn product_combines_rates() {
        let a = spec(Family::Power { u: 2.0 }, 1);
        let b = spec(Family::PsiCritical { p: 1.0 }, 1);
        let prod = PhiSpec::product(&[(&a, 0.5), (&b, 0.5)]).unwrap();
        assert_eq!(prod.rate(), RateTerm::new(0.75, 0.5));
        let x = prod.eval(0.01).unwrap();
        let y = a.eval(0.01).unwrap().sqrt() * b.eval(0.01).unwrap().sqrt();
        assert!((x - y).abs() < 1e-14);
    }

    #[test]
    fn json_shape() {
        let f: Family = serde_json::from_str(r#"{"family":"power","u":2.0}"#).unwrap();
        assert_eq!(f, Family::Power { u: 2.0 });
        let t: Family =
            serde_json::from_str(r#"{"family":"tabulated","samples":[1,0.5],"rate":{"beta":1,"gamma":0}}"#).unwrap();
        assert!(matches!(t, Family::Tabulated { .. }));
        let pp: Family = serde_json::from_str(r#"{"family":"piecewise_power","u":2,"v":"inf"}"#).unwrap();
        assert_eq!(pp, Family::PiecewisePower { u: Exponent::Finite(2.0), v: Exponent::Infinity });
    }
}
