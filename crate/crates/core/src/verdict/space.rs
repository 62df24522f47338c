use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::exponent::Exponent;
use crate::phi::{smallest_intc_epsilon, Family, PhiSpec};
use crate::seqspace::NormParams;

/// Levels over which the `E` scale checks its almost-increasing condition.
const INTC_LEVELS: u32 = 64;

/// The function-space scales the engine knows about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    /// Besov-Morrey `N^s_{φ,p,q}`.
    N,
    /// Besov-type `B^{s,φ}_{p,q}`.
    B,
    /// Triebel-Lizorkin-Morrey `E^s_{φ,p,q}`, which coincides with `F^{s,φ}_{p,q}`.
    #[serde(alias = "f")]
    E,
    /// Generalised Morrey `M_{φ,p}`.
    M,
    /// Classical Besov `B^s_{p,q}`, `0 < p ≤ ∞`.
    ClassicalBesov,
    /// Lebesgue `L_r`, `1 ≤ r ≤ ∞`.
    Lr,
    Bmo,
}

impl Scale {
    pub fn name(self) -> &'static str {
        match self {
            Scale::N => "N",
            Scale::B => "B",
            Scale::E => "E",
            Scale::M => "M",
            Scale::ClassicalBesov => "classical_besov",
            Scale::Lr => "Lr",
            Scale::Bmo => "bmo",
        }
    }
}

/// One space of one scale, with its parameters checked.
///
/// Scales without a user-supplied weight carry the weight that represents them on the
/// unit cube: `t^{d/p}` for classical Besov spaces and `L_r`, `φ ≡ 1` for `p = ∞` and
/// for `bmo = B^{0,1}_{2,2}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpaceSpec {
    pub scale: Scale,
    pub d: u32,
    pub s: f64,
    pub p: Exponent,
    pub q: Exponent,
    pub phi: PhiSpec,
}

#[derive(Serialize, Deserialize)]
struct SpaceDoc {
    scale: Scale,
    d: u32,
    #[serde(default)]
    s: f64,
    #[serde(default, alias = "r", skip_serializing_if = "Option::is_none")]
    p: Option<Exponent>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    q: Option<Exponent>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    phi: Option<Family>,
}

fn finite_p(p: f64) -> Result<f64> {
    if p.is_finite() && p > 0.0 {
        Ok(p)
    } else {
        Err(invalid(format!("p must be positive and finite for this scale, got {p}")))
    }
}

fn power_weight(d: u32, p: Exponent) -> Result<PhiSpec> {
    match p {
        Exponent::Finite(u) => PhiSpec::normalized(Family::Power { u }, d),
        Exponent::Infinity => PhiSpec::normalized(Family::Constant, d),
    }
}

impl SpaceSpec {
    fn weighted(scale: Scale, d: u32, s: f64, p: f64, q: Exponent, phi: Family) -> Result<SpaceSpec> {
        let p = finite_p(p)?;
        let params = NormParams::new(s, p, q, PhiSpec::new(phi, d)?)?;
        Ok(SpaceSpec { scale, d, s, p: Exponent::Finite(p), q, phi: params.phi })
    }

    /// `N^s_{φ,p,q}`.
    pub fn n(d: u32, s: f64, p: f64, q: Exponent, phi: Family) -> Result<SpaceSpec> {
        SpaceSpec::weighted(Scale::N, d, s, p, q, phi)
    }

    /// `B^{s,φ}_{p,q}`.
    pub fn b(d: u32, s: f64, p: f64, q: Exponent, phi: Family) -> Result<SpaceSpec> {
        SpaceSpec::weighted(Scale::B, d, s, p, q, phi)
    }

    /// `E^s_{φ,p,q}`; for `q < ∞` the weight must make `φ(t) t^{-ε}` almost increasing
    /// for some `ε > 0`.
    pub fn e(d: u32, s: f64, p: f64, q: Exponent, phi: Family) -> Result<SpaceSpec> {
        let spec = SpaceSpec::weighted(Scale::E, d, s, p, q, phi)?;
        if q.is_finite() && smallest_intc_epsilon(&spec.phi, INTC_LEVELS)?.is_none() {
            return Err(Error::Inadmissible(format!(
                "{} admits no epsilon > 0 with phi(t) t^-epsilon almost increasing",
                spec.phi.label()
            )));
        }
        Ok(spec)
    }

    /// `M_{φ,p}`.
    pub fn m(d: u32, p: f64, phi: Family) -> Result<SpaceSpec> {
        SpaceSpec::weighted(Scale::M, d, 0.0, p, Exponent::Infinity, phi)
    }

    /// `B^s_{p,q}`.
    pub fn classical_besov(d: u32, s: f64, p: Exponent, q: Exponent) -> Result<SpaceSpec> {
        if !p.is_valid() || !q.is_valid() || !s.is_finite() {
            return Err(invalid("classical Besov parameters need s finite and p, q in (0, inf]"));
        }
        Ok(SpaceSpec { scale: Scale::ClassicalBesov, d, s, p, q, phi: power_weight(d, p)? })
    }

    /// `L_r`.
    pub fn lr(d: u32, r: Exponent) -> Result<SpaceSpec> {
        if !(r.value() >= 1.0) {
            return Err(invalid(format!("L_r needs r >= 1, got {r}")));
        }
        Ok(SpaceSpec { scale: Scale::Lr, d, s: 0.0, p: r, q: Exponent::Infinity, phi: power_weight(d, r)? })
    }

    /// `bmo`, realised as `B^{0,φ}_{2,2}` with `φ ≡ 1`.
    pub fn bmo(d: u32) -> Result<SpaceSpec> {
        let c = SpaceSpec::b(d, 0.0, 2.0, Exponent::Finite(2.0), Family::Constant)?;
        Ok(SpaceSpec { scale: Scale::Bmo, ..c })
    }

    /// The same space with another smoothness.
    pub fn with_s(&self, s: f64) -> SpaceSpec {
        SpaceSpec { s, ..self.clone() }
    }

    pub fn p_value(&self) -> f64 {
        self.p.value()
    }

    /// Sequence-space parameters, where the scale has a finite `p`.
    pub fn norm_params(&self) -> Result<NormParams> {
        match self.p {
            Exponent::Finite(p) => NormParams::new(self.s, p, self.q, self.phi.clone()),
            Exponent::Infinity => Err(invalid(format!("{} has p = inf", self.label()))),
        }
    }

    /// The weighted spaces of the `B` scale with this space's parameters.
    pub fn as_b(&self) -> Result<SpaceSpec> {
        Ok(SpaceSpec { scale: Scale::B, p: Exponent::Finite(finite_p(self.p.value())?), ..self.clone() })
    }

    /// The `N` space with this space's parameters.
    pub fn as_n(&self) -> Result<SpaceSpec> {
        Ok(SpaceSpec { scale: Scale::N, p: Exponent::Finite(finite_p(self.p.value())?), ..self.clone() })
    }

    pub fn label(&self) -> String {
        match self.scale {
            Scale::Lr => format!("L_{}", self.p),
            Scale::Bmo => "bmo".to_string(),
            Scale::M => format!("M[p={}, phi={}]", self.p, self.phi.label()),
            Scale::ClassicalBesov => format!("B[s={}, p={}, q={}]", self.s, self.p, self.q),
            scale => format!("{}[s={}, p={}, q={}, phi={}]", scale.name(), self.s, self.p, self.q, self.phi.label()),
        }
    }

    fn from_doc(doc: SpaceDoc) -> Result<SpaceSpec> {
        let need_phi = || doc.phi.clone().ok_or_else(|| invalid(format!("scale {} needs phi", doc.scale.name())));
        let need_p = || doc.p.ok_or_else(|| invalid(format!("scale {} needs p", doc.scale.name())));
        let q = doc.q.unwrap_or(Exponent::Infinity);
        match doc.scale {
            Scale::N => SpaceSpec::n(doc.d, doc.s, need_p()?.value(), q, need_phi()?),
            Scale::B => SpaceSpec::b(doc.d, doc.s, need_p()?.value(), q, need_phi()?),
            Scale::E => SpaceSpec::e(doc.d, doc.s, need_p()?.value(), q, need_phi()?),
            Scale::M => SpaceSpec::m(doc.d, need_p()?.value(), need_phi()?),
            Scale::ClassicalBesov => SpaceSpec::classical_besov(doc.d, doc.s, need_p()?, q),
            Scale::Lr => SpaceSpec::lr(doc.d, need_p()?),
            Scale::Bmo => SpaceSpec::bmo(doc.d),
        }
    }

    fn to_doc(&self) -> SpaceDoc {
        let weighted = matches!(self.scale, Scale::N | Scale::B | Scale::E | Scale::M);
        SpaceDoc {
            scale: self.scale,
            d: self.d,
            s: self.s,
            p: (self.scale != Scale::Bmo).then_some(self.p),
            q: matches!(self.scale, Scale::N | Scale::B | Scale::E | Scale::ClassicalBesov).then_some(self.q),
            phi: weighted.then(|| self.phi.family().clone()),
        }
    }
}

impl Serialize for SpaceSpec {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_doc().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SpaceSpec {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        SpaceSpec::from_doc(SpaceDoc::deserialize(deserializer)?).map_err(serde::de::Error::custom)
    }
}
