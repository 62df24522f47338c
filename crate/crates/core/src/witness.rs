//! Extremal sequence families with a probe that measures them in source and target.
//! The interpolation inequality check and seeded random sequences live here too.
//!
//! A probe on a truncated tree only illustrates a verdict; it cannot prove one.
//! Families live on the level schedule `j_k = 4k` unless stated otherwise.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::exponent::Exponent;
use crate::indices::{alpha_rate, xi_rate, xi_seq, PairContext};
use crate::phi::PhiSpec;
use crate::rate::RateTerm;
use crate::seqspace::{
    b_cube_values, b_norm, besov_sup_cube_values, besov_sup_norm, morton_decode, n_norm_star, DyadicIndex,
    DyadicSeq, NormParams, CELL_LIMIT,
};
use crate::verdict::{Scale, SpaceSpec};

/// Step of the default level schedule.
pub const LEVEL_STEP: u32 = 4;

/// `log2` of the largest number of cells one filling member may occupy.
const FILL_BITS: u32 = 23;

/// `j_k = 4k` for `k = 1..=count`.
pub fn default_levels(count: usize) -> Vec<u32> {
    (1..=count as u32).map(|k| LEVEL_STEP * k).collect()
}

/// Which normalisation a single-cube family uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scaling {
    /// `2^{-j s1} φ1(2^{-j})^{-1}`: unit norm in the source.
    SourceNormalized,
    /// `2^{-j s2} φ2(2^{-j})^{-1}`: unit norm in the target.
    TargetNormalized,
}

/// The recipe a family was built with.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "recipe", rename_all = "snake_case")]
pub enum Construction {
    SingleCube { scaling: Scaling },
    Filling { j0: u32 },
    SupTarget,
}

#[derive(Clone, Debug)]
pub struct WitnessFamily {
    pub members: Vec<DyadicSeq>,
    pub construction: Construction,
    pub levels: Vec<u32>,
}

impl WitnessFamily {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Every member multiplied by `c`.
    pub fn scaled(&self, c: f64) -> WitnessFamily {
        WitnessFamily { members: self.members.iter().map(|m| m.scale(c)).collect(), ..self.clone() }
    }
}

fn check_levels(levels: &[u32], big_j: u32) -> Result<()> {
    if levels.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid(format!("witness levels {levels:?} must be strictly increasing")));
    }
    if let Some(&last) = levels.last() {
        if last > big_j {
            return Err(invalid(format!("witness level {last} exceeds truncation {big_j}")));
        }
    }
    Ok(())
}

fn single_cube(d: u32, big_j: u32, j: u32, v: f64) -> Result<DyadicSeq> {
    let mut seq = DyadicSeq::new(d, big_j)?;
    seq.insert(&DyadicIndex::origin(j, d), v)?;
    Ok(seq)
}

/// `2^{-js} φ(2^{-j})^{-1}`.
fn unit_value(s: f64, phi: &PhiSpec, j: u32) -> Result<f64> {
    Ok((-f64::from(j) * s).exp2() / phi.eval_level(j)?)
}

/// One cube per member, at `(j_k, 0)`, scaled to unit norm in the source or in the
/// target space.
pub fn build_family_single_cube(
    src: &SpaceSpec,
    tgt: &SpaceSpec,
    levels: &[u32],
    big_j: u32,
    scaling: Scaling,
) -> Result<WitnessFamily> {
    check_levels(levels, big_j)?;
    let (s, phi) = match scaling {
        Scaling::SourceNormalized => (src.s, src.phi.normalize()?),
        Scaling::TargetNormalized => (tgt.s, tgt.phi.normalize()?),
    };
    let members = levels
        .iter()
        .map(|&j| single_cube(src.d, big_j, j, unit_value(s, &phi, j)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(WitnessFamily { members, construction: Construction::SingleCube { scaling }, levels: levels.to_vec() })
}

/// Members constant on every level-`j_k` cube inside `Q_{j0,0}`, with value
/// `2^{-j_k s2} φ1(2^{-j0})^{-1}`.
pub fn build_family_filling(src: &SpaceSpec, s2: f64, j0: u32, levels: &[u32], big_j: u32) -> Result<WitnessFamily> {
    check_levels(levels, big_j)?;
    if levels.first().is_some_and(|&j| j <= j0) {
        return Err(invalid(format!("filling levels must exceed j0 = {j0}")));
    }
    let phi = src.phi.normalize()?;
    let phi_j0 = phi.eval_level(j0)?;
    let members = levels
        .iter()
        .map(|&j| {
            let mut seq = DyadicSeq::new(src.d, big_j)?;
            seq.fill_subcube(j0, j, (-f64::from(j) * s2).exp2() / phi_j0)?;
            Ok(seq)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(WitnessFamily { members, construction: Construction::Filling { j0 }, levels: levels.to_vec() })
}

/// Single cubes `2^{-j s1} φ(2^{-j})^{-1}` at `(j_k, 0)`, of unit `b` norm in the source.
pub fn build_family_binf(src: &SpaceSpec, levels: &[u32], big_j: u32) -> Result<WitnessFamily> {
    if !matches!(src.scale, Scale::B | Scale::Bmo) {
        return Err(Error::Unsupported(format!("the sup-target family needs a B source, got {}", src.label())));
    }
    check_levels(levels, big_j)?;
    let phi = src.phi.normalize()?;
    let members = levels
        .iter()
        .map(|&j| single_cube(src.d, big_j, j, unit_value(src.s, &phi, j)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(WitnessFamily { members, construction: Construction::SupTarget, levels: levels.to_vec() })
}

/// The level schedule for a filling family: `j_k = j0 + k·step` with the step shrunk so
/// the last member stays within the cell guard.
pub fn filling_levels(j0: u32, d: u32, count: usize, big_j: u32) -> Vec<u32> {
    let room = FILL_BITS / (d * count.max(1) as u32);
    let step = room.clamp(1, LEVEL_STEP);
    (1..=count as u32).map(|k| j0 + k * step).take_while(|&j| j <= big_j).collect()
}

/// A norm evaluator for one side of an embedding.
#[derive(Clone, Debug)]
enum Evaluator {
    N(NormParams),
    B(NormParams),
    Sup { s: f64, q: Exponent },
}

impl Evaluator {
    fn for_space(spec: &SpaceSpec) -> Result<Evaluator> {
        match spec.scale {
            Scale::N => Ok(Evaluator::N(spec.norm_params()?)),
            Scale::B | Scale::Bmo => Ok(Evaluator::B(spec.norm_params()?)),
            Scale::ClassicalBesov if spec.p == Exponent::Infinity => Ok(Evaluator::Sup { s: spec.s, q: spec.q }),
            Scale::ClassicalBesov => Ok(Evaluator::N(spec.as_n()?.norm_params()?)),
            _ => Err(Error::Unsupported(format!("no sequence norm for {}", spec.label()))),
        }
    }

    fn norm(&self, lambda: &DyadicSeq) -> Result<f64> {
        match self {
            Evaluator::N(p) => n_norm_star(lambda, p),
            Evaluator::B(p) => b_norm(lambda, p),
            Evaluator::Sup { s, q } => Ok(besov_sup_norm(lambda, *s, *q)),
        }
    }
}

/// Norms of a family measured in a source and a target space.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeReport {
    pub truncation: u32,
    pub members: usize,
    pub levels: Vec<u32>,
    pub source_norms: Vec<f64>,
    pub max_source_norm: f64,
    /// Smallest target distance over all pairs; absent for fewer than two members.
    pub min_pairwise_target_gap: Option<f64>,
    /// `‖λ^{(k)} − λ^{(k+1)}‖` in the target for consecutive members.
    pub consecutive_gaps: Vec<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<String>,
}

/// Source norms of all members and target distances of all pairs.
pub fn probe_compactness(family: &WitnessFamily, src: &SpaceSpec, tgt: &SpaceSpec) -> Result<ProbeReport> {
    if src.d != tgt.d {
        return Err(Error::DimensionMismatch(src.d, tgt.d));
    }
    if let Some(m) = family.members.iter().find(|m| m.dim() != src.d) {
        return Err(Error::DimensionMismatch(m.dim(), src.d));
    }
    let truncation = family.members.iter().map(DyadicSeq::max_level).max().unwrap_or(0);
    let source = Evaluator::for_space(src)?;
    let target = Evaluator::for_space(tgt)?;
    let source_norms =
        family.members.par_iter().map(|m| source.norm(m)).collect::<Result<Vec<_>>>()?;
    let max_source_norm = source_norms.iter().fold(0.0f64, |a, &b| a.max(b));
    let k = family.members.len();
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|a| (a + 1..k).map(move |b| (a, b))).collect();
    let gaps = pairs
        .par_iter()
        .map(|&(a, b)| target.norm(&family.members[a].abs_diff(&family.members[b])?))
        .collect::<Result<Vec<_>>>()?;
    let min_pairwise_target_gap = gaps.iter().copied().reduce(f64::min);
    let consecutive_gaps =
        pairs.iter().zip(&gaps).filter(|((a, b), _)| b - a == 1).map(|(_, &g)| g).collect();
    let mut flags = Vec::new();
    if k < 2 {
        flags.push("need K>=2 for a pairwise gap".to_string());
    }
    Ok(ProbeReport {
        truncation,
        members: k,
        levels: family.levels.clone(),
        source_norms,
        max_source_norm,
        min_pairwise_target_gap,
        consecutive_gaps,
        flags,
    })
}

/// The family a non-compactness argument calls for, or why there is none.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Plan {
    Build { construction: Construction },
    Unavailable { reason: String },
}

/// Picks the family for `N → N` (or `B → b^{s2}_{∞,∞}`) following the case analysis of
/// the compactness proof.
///
/// When `ξ → 0` the source-normalised single cubes show the decay. When `ξ` stays
/// bounded away from zero and `α_j` converges, a target weight with a positive limit
/// takes source-normalised cubes, a ratio `φ2/φ1^ϱ` that does not decay takes
/// target-normalised cubes, and a decaying ratio takes the filling family at the level
/// where `α` is attained (`ϱ = 1` only). A divergent `α_j` takes target-normalised
/// cubes.
pub fn plan_family(src: &SpaceSpec, tgt: &SpaceSpec, big_j: u32) -> Result<Plan> {
    if matches!(src.scale, Scale::B | Scale::Bmo) && tgt.scale == Scale::ClassicalBesov && !tgt.p.is_finite() {
        return Ok(Plan::Build { construction: Construction::SupTarget });
    }
    let (src, tgt) = (as_n_space(src)?, as_n_space(tgt)?);
    let ctx = PairContext::new(src.p.value(), src.q, &src.phi, tgt.p.value(), tgt.q, &tgt.phi)?;
    let xi = xi_rate(&ctx, src.s, tgt.s);
    let single = |scaling| Ok(Plan::Build { construction: Construction::SingleCube { scaling } });
    if xi.is_null() {
        return single(Scaling::SourceNormalized);
    }
    if ctx.qstar.is_finite() {
        return Ok(Plan::Unavailable {
            reason: "q1 > q2: non-compactness follows from the failure of continuity".to_string(),
        });
    }
    if !xi.is_bounded() {
        return Ok(Plan::Unavailable { reason: "xi is unbounded, so the embedding is not continuous".to_string() });
    }
    if !alpha_rate(&ctx).is_bounded() {
        return single(Scaling::TargetNormalized);
    }
    if ctx.phi2.has_positive_limit() {
        return single(Scaling::SourceNormalized);
    }
    if ctx.ratio_rate().is_bounded_below() {
        return single(Scaling::TargetNormalized);
    }
    if ctx.rho < 1.0 {
        return Ok(Plan::Unavailable {
            reason: "p1 < p2 with alpha attained at a fixed level: the construction is not reproduced".to_string(),
        });
    }
    let ratio = crate::indices::alpha_seq(&ctx, big_j)?;
    let top = ratio.last().copied().unwrap_or(0.0);
    let j0 = ratio.iter().position(|&a| a >= top * (1.0 - 1e-12)).unwrap_or(0) as u32;
    Ok(Plan::Build { construction: Construction::Filling { j0 } })
}

fn as_n_space(spec: &SpaceSpec) -> Result<SpaceSpec> {
    match spec.scale {
        Scale::N => Ok(spec.clone()),
        Scale::ClassicalBesov if spec.p.is_finite() => spec.as_n(),
        _ => Err(Error::Unsupported(format!("no witness family for {}", spec.label()))),
    }
}

/// A planned family, its probe, and the separation threshold.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessReport {
    pub plan: Plan,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probe: Option<ProbeReport>,
    /// `max ξ_j` over `J/2 ≤ j ≤ J`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta_hat: Option<f64>,
    /// Whether the smallest gap reaches `0.25 β̂`; the factor is a convention, the
    /// proofs only give some positive constant.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub separated: Option<bool>,
    /// `gap(1) / gap(K−1)` for decaying families.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decay_factor: Option<f64>,
    pub xi_rate: Option<RateTerm>,
}

/// Fraction of `β̂` the smallest gap has to reach.
pub const SEPARATION_FACTOR: f64 = 0.25;

/// `max ξ_j` over `J/2 ≤ j ≤ J`, the observed size of `lim sup ξ_j`.
pub fn beta_hat(src: &SpaceSpec, tgt: &SpaceSpec, big_j: u32) -> Result<f64> {
    let ctx = PairContext::new(src.p.value(), src.q, &src.phi, tgt.p.value(), tgt.q, &tgt.phi)?;
    let xi = xi_seq(&ctx, src.s, tgt.s, big_j)?;
    Ok(xi[big_j as usize / 2..].iter().fold(0.0f64, |a, &b| a.max(b)))
}

/// Plans, builds and probes a family with `count` members at truncation `J`.
pub fn run_witness(src: &SpaceSpec, tgt: &SpaceSpec, big_j: u32, count: usize) -> Result<WitnessReport> {
    let plan = plan_family(src, tgt, big_j)?;
    let construction = match &plan {
        Plan::Build { construction } => *construction,
        Plan::Unavailable { .. } => {
            return Ok(WitnessReport {
                plan,
                probe: None,
                beta_hat: None,
                separated: None,
                decay_factor: None,
                xi_rate: None,
            })
        }
    };
    let levels = default_levels(count);
    let (family, beta, xi) = match construction {
        Construction::SupTarget => {
            let family = build_family_binf(src, &levels, big_j)?;
            // 2^{j(s2−s1)} φ(2^{-j})^{-1}
            let phi = src.phi.normalize()?;
            let samples = phi.dyadic_samples(big_j)?;
            let beta = (big_j / 2..=big_j)
                .map(|j| (f64::from(j) * (tgt.s - src.s)).exp2() / samples[j as usize])
                .fold(0.0f64, f64::max);
            (family, beta, RateTerm::exp2(tgt.s - src.s).mul(phi.rate().recip()))
        }
        Construction::SingleCube { scaling } => {
            let (n1, n2) = (as_n_space(src)?, as_n_space(tgt)?);
            let ctx = PairContext::new(n1.p.value(), n1.q, &n1.phi, n2.p.value(), n2.q, &n2.phi)?;
            let family = build_family_single_cube(&n1, &n2, &levels, big_j, scaling)?;
            (family, beta_hat(&n1, &n2, big_j)?, xi_rate(&ctx, n1.s, n2.s))
        }
        Construction::Filling { j0 } => {
            let (n1, n2) = (as_n_space(src)?, as_n_space(tgt)?);
            let ctx = PairContext::new(n1.p.value(), n1.q, &n1.phi, n2.p.value(), n2.q, &n2.phi)?;
            let levels = filling_levels(j0, n1.d, count, big_j);
            let family = build_family_filling(&n1, n2.s, j0, &levels, big_j)?;
            (family, beta_hat(&n1, &n2, big_j)?, xi_rate(&ctx, n1.s, n2.s))
        }
    };
    let probe = probe_compactness(&family, src, tgt)?;
    let decaying = xi.is_null();
    let separated = match (decaying, probe.min_pairwise_target_gap) {
        (false, Some(g)) => Some(g >= SEPARATION_FACTOR * beta),
        _ => None,
    };
    let decay_factor = match (decaying, probe.consecutive_gaps.first(), probe.consecutive_gaps.last()) {
        (true, Some(&a), Some(&b)) if probe.consecutive_gaps.len() >= 2 && b > 0.0 => Some(a / b),
        _ => None,
    };
    Ok(WitnessReport {
        plan,
        probe: Some(probe),
        beta_hat: Some(beta),
        separated,
        decay_factor,
        xi_rate: Some(xi),
    })
}

/// The second space in the interpolation inequality.
#[derive(Clone, Debug)]
pub enum GnSecond {
    /// `b^{s2,φ2}_{p2,q2}` with finite `p2`.
    Weighted(NormParams),
    /// `b^{s2}_{∞,q2}`.
    Sup { s: f64, q: Exponent },
}

/// Both sides of `‖λ | b^{s,φ}_{p,q}‖ ≤ ‖λ | b^{s1,φ1}_{p1,q1}‖^{1−θ} ‖λ | second‖^θ`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GnReport {
    pub theta: f64,
    pub interpolated: f64,
    pub bound: f64,
    /// `interpolated / bound`, zero when both vanish.
    pub ratio: f64,
    /// Largest per-cube ratio of the interpolated quantity to the product of powers.
    pub max_cube_ratio: f64,
    pub cubes_checked: usize,
}

/// Parameters `(s, p, q, φ)` of the interpolated space.
pub fn gn_params(first: &NormParams, second: &GnSecond, theta: f64) -> Result<NormParams> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(invalid(format!("theta must lie in (0, 1), got {theta}")));
    }
    let (s2, q2) = match second {
        GnSecond::Weighted(p) => (p.s, p.q),
        GnSecond::Sup { s, q } => (*s, *q),
    };
    if !(s2 < first.s) {
        return Err(invalid(format!("the inequality needs s2 < s1, got s1 = {}, s2 = {s2}", first.s)));
    }
    let s = first.s * (1.0 - theta) + theta * s2;
    let q = Exponent::from_recip((1.0 - theta) * first.q.recip() + theta * q2.recip());
    let (inv_p, phi) = match second {
        GnSecond::Weighted(p2) => {
            if p2.phi.dim() != first.phi.dim() {
                return Err(Error::DimensionMismatch(first.phi.dim(), p2.phi.dim()));
            }
            let phi = PhiSpec::product(&[(&first.phi, 1.0 - theta), (&p2.phi, theta)])?;
            ((1.0 - theta) / first.p + theta / p2.p, phi)
        }
        GnSecond::Sup { .. } => ((1.0 - theta) / first.p, PhiSpec::product(&[(&first.phi, 1.0 - theta)])?),
    };
    NormParams::new(s, 1.0 / inv_p, q, phi)
}

/// Evaluates both sides of the interpolation inequality and the Hölder chain cube by
/// cube.
pub fn gn_check(lambda: &DyadicSeq, first: &NormParams, second: &GnSecond, theta: f64) -> Result<GnReport> {
    let mid = gn_params(first, second, theta)?;
    let inner = b_cube_values(lambda, &mid)?;
    let one = b_cube_values(lambda, first)?;
    let two = match second {
        GnSecond::Weighted(p2) => b_cube_values(lambda, p2)?,
        GnSecond::Sup { s, q } => besov_sup_cube_values(lambda, *s, *q),
    };
    let mut max_cube_ratio = 0.0f64;
    let mut cubes_checked = 0;
    for (nu, cubes) in inner.iter().enumerate() {
        for (k, &v) in cubes {
            let a = one[nu].get(k).copied().unwrap_or(0.0);
            let b = two[nu].get(k).copied().unwrap_or(0.0);
            let rhs = a.powf(1.0 - theta) * b.powf(theta);
            cubes_checked += 1;
            let r = if v == 0.0 {
                0.0
            } else if rhs == 0.0 {
                f64::INFINITY
            } else {
                v / rhs
            };
            max_cube_ratio = max_cube_ratio.max(r);
        }
    }
    let interpolated = b_norm(lambda, &mid)?;
    let n1 = b_norm(lambda, first)?;
    let n2 = match second {
        GnSecond::Weighted(p2) => b_norm(lambda, p2)?,
        GnSecond::Sup { s, q } => besov_sup_norm(lambda, *s, *q),
    };
    let bound = n1.powf(1.0 - theta) * n2.powf(theta);
    let ratio = if interpolated == 0.0 { 0.0 } else { interpolated / bound };
    Ok(GnReport { theta, interpolated, bound, ratio, max_cube_ratio, cubes_checked })
}

/// How random entries are drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Distribution {
    /// Uniform on `(0, 1]`.
    Uniform01,
    /// Uniform on `(0, 2^{-j}]` at level `j`.
    DyadicDecaying,
}

/// A sequence on levels `0..=J` where each cube is non-zero with probability `density`.
/// Deterministic in `seed`.
pub fn random_seq(seed: u64, d: u32, big_j: u32, density: f64, distribution: Distribution) -> Result<DyadicSeq> {
    if !(density > 0.0 && density <= 1.0) {
        return Err(invalid(format!("density must lie in (0, 1], got {density}")));
    }
    let cells: f64 = (0..=big_j).map(|j| (f64::from(j * d)).exp2()).sum();
    if cells > CELL_LIMIT {
        return Err(Error::MemoryGuard { cells, limit: CELL_LIMIT });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seq = DyadicSeq::new(d, big_j)?;
    for j in 0..=big_j {
        let scale = match distribution {
            Distribution::Uniform01 => 1.0,
            Distribution::DyadicDecaying => (-f64::from(j)).exp2(),
        };
        for code in 0..1u128 << (j * d) {
            if rng.gen::<f64>() < density {
                let v = 1.0 - rng.gen::<f64>();
                seq.insert(&DyadicIndex::new(j, morton_decode(code, j, d)), v * scale)?;
            }
        }
    }
    Ok(seq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phi::Family;
    use Exponent::{Finite, Infinity};

    fn n(s: f64, p: f64, q: Exponent, f: Family, d: u32) -> SpaceSpec {
        SpaceSpec::n(d, s, p, q, f).unwrap()
    }

    #[test]
    fn identity_family() {
        let a = n(0.5, 2.0, Infinity, Family::Power { u: 2.0 }, 1);
        let fam = build_family_single_cube(&a, &a, &default_levels(6), 40, Scaling::SourceNormalized).unwrap();
        let r = probe_compactness(&fam, &a, &a).unwrap();
        assert!((r.max_source_norm - 1.0).abs() < 1e-12);
        assert!((r.min_pairwise_target_gap.unwrap() - 1.0).abs() < 1e-12);
        let r2 = probe_compactness(&fam.scaled(2.0), &a, &a).unwrap();
        assert!((r2.max_source_norm - 2.0).abs() < 1e-12);
        assert!((r2.min_pairwise_target_gap.unwrap() - 2.0).abs() < 1e-12);
        // finite q: two unit levels give 2^{1/q}
        let b = n(0.5, 2.0, Finite(2.0), Family::Power { u: 2.0 }, 1);
        let r = probe_compactness(&fam, &b, &b).unwrap();
        assert!((r.min_pairwise_target_gap.unwrap() - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn single_member_is_flagged() {
        let a = n(0.0, 1.0, Infinity, Family::Power { u: 1.0 }, 1);
        let fam = build_family_single_cube(&a, &a, &[4], 8, Scaling::SourceNormalized).unwrap();
        let r = probe_compactness(&fam, &a, &a).unwrap();
        assert_eq!(r.min_pairwise_target_gap, None);
        assert!(!r.flags.is_empty());
        assert!(build_family_single_cube(&a, &a, &[4, 4], 8, Scaling::SourceNormalized).is_err());
    }

    #[test]
    fn filling_counts() {
        let a = n(0.0, 2.0, Infinity, Family::Power { u: 2.0 }, 1);
        let fam = build_family_filling(&a, 0.0, 1, &[3], 4).unwrap();
        assert_eq!(fam.members[0].nnz(), 4);
        let big = n(0.0, 2.0, Infinity, Family::Power { u: 2.0 }, 1);
        assert!(matches!(build_family_filling(&big, 0.0, 0, &[30], 40), Err(Error::MemoryGuard { .. })));
    }

    #[test]
    fn filling_norms() {
        // φ1 = t^{1/2}, p1 = 2; φ2 = t, p2 = 1; α attained at j0 = 0
        let src = n(0.3, 2.0, Finite(1.0), Family::Power { u: 2.0 }, 1);
        let tgt = n(0.3, 1.0, Finite(2.0), Family::Power { u: 1.0 }, 1);
        assert_eq!(plan_family(&src, &tgt, 40).unwrap(), Plan::Build { construction: Construction::Filling { j0: 0 } });
        let fam = build_family_filling(&src, tgt.s, 0, &filling_levels(0, 1, 6, 40), 40).unwrap();
        let r = probe_compactness(&fam, &src, &tgt).unwrap();
        assert!(r.max_source_norm <= 1.0 + 1e-12);
        let alpha = 1.0;
        let tp = tgt.norm_params().unwrap();
        for m in &fam.members {
            assert!((n_norm_star(m, &tp).unwrap() - alpha).abs() < 1e-12);
        }
    }

    #[test]
    fn binf_members_have_unit_norm() {
        let src = SpaceSpec::b(1, 1.0, 1.0, Finite(2.0), Family::PsiCritical { p: 1.0 }).unwrap();
        let fam = build_family_binf(&src, &default_levels(6), 40).unwrap();
        let p = src.norm_params().unwrap();
        for m in &fam.members {
            assert!((b_norm(m, &p).unwrap() - 1.0).abs() < 1e-12);
        }
        let empty = build_family_binf(&src, &[], 40).unwrap();
        let tgt = SpaceSpec::classical_besov(1, 0.0, Infinity, Infinity).unwrap();
        let r = probe_compactness(&empty, &src, &tgt).unwrap();
        assert_eq!((r.members, r.max_source_norm, r.min_pairwise_target_gap), (0, 0.0, None));
        // ψ at s2 = σ∞ is compact, t^d at s2 = σ∞ is not
        assert!(run_witness(&src, &tgt, 40, 7).unwrap().decay_factor.is_some());
        let pow = SpaceSpec::b(1, 1.0, 1.0, Finite(2.0), Family::Power { u: 1.0 }).unwrap();
        let r = run_witness(&pow, &tgt, 40, 6).unwrap();
        assert_eq!(r.separated, Some(true));
    }

    #[test]
    fn compact_gaps_follow_xi() {
        let src = n(1.0, 1.0, Finite(2.0), Family::Power { u: 2.0 }, 1);
        let tgt = n(0.0, 2.0, Finite(2.0), Family::Power { u: 4.0 }, 1);
        let r = run_witness(&src, &tgt, 40, 7).unwrap();
        let probe = r.probe.unwrap();
        let ctx = PairContext::new(1.0, Finite(2.0), &src.phi, 2.0, Finite(2.0), &tgt.phi).unwrap();
        let xi = xi_seq(&ctx, src.s, tgt.s, 40).unwrap();
        for (k, g) in probe.consecutive_gaps.iter().enumerate() {
            assert!(*g <= 2.0 * xi[probe.levels[k] as usize]);
        }
        assert!(r.decay_factor.unwrap() >= 10.0);
    }

    #[test]
    fn gn_single_cube_is_sharp() {
        let mut lambda = DyadicSeq::new(1, 3).unwrap();
        lambda.insert(&DyadicIndex::new(2, vec![1]), 0.7).unwrap();
        let p1 = NormParams::new(1.0, 1.0, Finite(1.0), PhiSpec::new(Family::Power { u: 1.0 }, 1).unwrap()).unwrap();
        let p2 = NormParams::new(0.0, 2.0, Finite(2.0), PhiSpec::new(Family::Power { u: 2.0 }, 1).unwrap()).unwrap();
        let r = gn_check(&lambda, &p1, &GnSecond::Weighted(p2), 0.4).unwrap();
        assert!((r.ratio - 1.0).abs() < 1e-12);
        let r = gn_check(&DyadicSeq::new(1, 3).unwrap(), &p1, &GnSecond::Sup { s: 0.0, q: Infinity }, 0.5).unwrap();
        assert_eq!((r.interpolated, r.bound, r.ratio), (0.0, 0.0, 0.0));
        assert!(gn_check(&lambda, &p1, &GnSecond::Sup { s: 2.0, q: Infinity }, 0.5).is_err());
    }

    #[test]
    fn random_is_deterministic() {
        let a = random_seq(7, 2, 4, 0.3, Distribution::Uniform01).unwrap();
        let b = random_seq(7, 2, 4, 0.3, Distribution::Uniform01).unwrap();
        assert_eq!(a, b);
        let one = random_seq(1, 1, 0, 1.0, Distribution::DyadicDecaying).unwrap();
        assert_eq!(one.nnz(), 1);
        let dec = random_seq(3, 1, 6, 1.0, Distribution::DyadicDecaying).unwrap();
        assert!(dec.level_max(6) <= 1.0 / 64.0);
    }
}
