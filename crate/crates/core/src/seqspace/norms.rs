use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use super::dyadic::{morton_decode, DyadicSeq};
use super::sum::{compensated_sum, Compensated};
use crate::error::{invalid, Error, Result};
use crate::exponent::Exponent;
use crate::phi::{validate_gp, PhiSpec};

/// Levels over which [`NormParams::new`] checks the weight.
const GP_CHECK_LEVELS: u32 = 64;

/// Coarse levels `ν < 0` visited by the coordinate evaluator.
const COARSE_LEVELS: u32 = 5;

/// Smoothness, integrability, fine index and weight of one sequence space.
#[derive(Clone, Debug, PartialEq)]
pub struct NormParams {
    pub s: f64,
    pub p: f64,
    pub q: Exponent,
    pub phi: PhiSpec,
}

impl NormParams {
    /// Normalizes `phi` and checks the dyadic `G_p` conditions.
    pub fn new(s: f64, p: f64, q: Exponent, phi: PhiSpec) -> Result<NormParams> {
        if !s.is_finite() {
            return Err(invalid(format!("smoothness must be finite, got {s}")));
        }
        if !(p.is_finite() && p > 0.0) {
            return Err(invalid(format!("p must be positive and finite, got {p}")));
        }
        if !q.is_valid() {
            return Err(invalid(format!("q must lie in (0, inf], got {q}")));
        }
        let phi = phi.normalize()?;
        let report = validate_gp(&phi, p, GP_CHECK_LEVELS)?;
        if !report.ok() {
            return Err(Error::Inadmissible(format!(
                "{} is not in G_p for p = {p} (first violation at level {:?})",
                phi.label(),
                report.first_violation_level
            )));
        }
        Ok(NormParams { s, p, q, phi })
    }

    /// Same parameters with another fine index.
    pub fn with_q(&self, q: Exponent) -> NormParams {
        NormParams { q, ..self.clone() }
    }

    fn phi_levels(&self, levels: u32) -> Result<Vec<f64>> {
        self.phi.dyadic_samples(levels)
    }
}

fn check_dim(lambda: &DyadicSeq, params: &NormParams) -> Result<()> {
    if lambda.dim() != params.phi.dim() {
        return Err(Error::DimensionMismatch(lambda.dim(), params.phi.dim()));
    }
    Ok(())
}

/// `(Σ |v|^q)^{1/q}`, or `max |v|` for `q = ∞`. Computed relative to the largest term.
pub fn ell_q(values: &[f64], q: Exponent) -> f64 {
    let top = values.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    if top == 0.0 {
        return 0.0;
    }
    match q {
        Exponent::Infinity => top,
        Exponent::Finite(q) => {
            let s = compensated_sum(values.iter().map(|v| (v.abs() / top).powf(q)));
            top * s.powf(1.0 / q)
        }
    }
}

/// Walks the cube sums `Σ_{Q_{j,m} ⊂ Q_{ν,k}} λ_{j,m}^p` for `ν = j, j-1, …, 0`, calling
/// `f(ν, k, sum)` on every cube with non-zero content.
fn for_each_cube_sum<F: FnMut(u32, u128, f64)>(lambda: &DyadicSeq, j: u32, p: f64, mut f: F) {
    let d = lambda.dim();
    if let Some(dense) = lambda.dense_level(j) {
        let mut cur: Vec<f64> = dense.iter().map(|v| v.powf(p)).collect();
        let fan = 1usize << d;
        for nu in (0..=j).rev() {
            for (k, &v) in cur.iter().enumerate() {
                if v != 0.0 {
                    f(nu, k as u128, v);
                }
            }
            if nu > 0 {
                cur = cur.chunks(fan).map(|c| compensated_sum(c.iter().copied())).collect();
            }
        }
        return;
    }
    let mut cur: Vec<(u128, Compensated)> = lambda
        .level_entries(j)
        .into_iter()
        .map(|(c, v)| {
            let mut acc = Compensated::new();
            acc.add(v.powf(p));
            (c, acc)
        })
        .collect();
    for nu in (0..=j).rev() {
        for (k, acc) in &cur {
            f(nu, *k, acc.value());
        }
        if nu == 0 {
            break;
        }
        // keys stay sorted under the shift, so children of one parent are adjacent
        let mut next: Vec<(u128, Compensated)> = Vec::with_capacity(cur.len());
        for (k, acc) in cur {
            let parent = k >> d;
            match next.last_mut() {
                Some((pk, pacc)) if *pk == parent => pacc.merge(acc),
                _ => next.push((parent, acc)),
            }
        }
        cur = next;
    }
}

/// Per-level quantity `sup_{0≤ν≤j, k} φ(2^{-ν}) 2^{(ν−j)d/p} (Σ_{Q_{j,m}⊂Q_{ν,k}} λ^p)^{1/p}`.
fn star_level(lambda: &DyadicSeq, j: u32, p: f64, phi: &[f64]) -> f64 {
    let dp = f64::from(lambda.dim()) / p;
    let mut best = 0.0f64;
    for_each_cube_sum(lambda, j, p, |nu, _, sum| {
        let v = phi[nu as usize] * ((f64::from(nu) - f64::from(j)) * dp).exp2() * sum.powf(1.0 / p);
        best = best.max(v);
    });
    best
}

/// Levelwise Morrey quantities `2^{js} · ‖Σ_m λ_{j,m} χ_{j,m} | M_{φ,p}‖` for `j = 0..=J`.
pub fn n_levels_star(lambda: &DyadicSeq, params: &NormParams) -> Result<Vec<f64>> {
    check_dim(lambda, params)?;
    let levels = lambda.max_level();
    let phi = params.phi_levels(levels)?;
    Ok((0..=levels)
        .into_par_iter()
        .map(|j| (f64::from(j) * params.s).exp2() * star_level(lambda, j, params.p, &phi))
        .collect())
}

/// The `n^s_{φ,p,q}` quasi-norm through per-level cube-sum pyramids over `0 ≤ ν ≤ j`.
pub fn n_norm_star(lambda: &DyadicSeq, params: &NormParams) -> Result<f64> {
    Ok(ell_q(&n_levels_star(lambda, params)?, params.q))
}

/// The `n^s_{φ,p,q}` quasi-norm evaluated from the Morrey norm of each level's step
/// function, with cubes visited by coordinates.
///
/// Covers cubes larger than the unit cube (`ν = −5..−1`), the cubes between the unit
/// cube and level `j`, and the cubes below level `j` down to `J`. The larger cubes need
/// `φ(2^{|ν|})` and are skipped for weights only known on `(0, 1]`.
pub fn n_norm_morrey(lambda: &DyadicSeq, params: &NormParams) -> Result<f64> {
    check_dim(lambda, params)?;
    let d = lambda.dim();
    let big_j = lambda.max_level();
    let p = params.p;
    let phi = params.phi_levels(big_j)?;
    let coarse: Vec<Option<f64>> = (1..=COARSE_LEVELS).map(|k| params.phi.eval_coarse(k)).collect();
    let df = f64::from(d);

    let per_level: Vec<f64> = (0..=big_j)
        .into_par_iter()
        .map(|j| {
            let entries: Vec<(Vec<u64>, f64)> = lambda
                .level_entries(j)
                .into_iter()
                .map(|(c, v)| (morton_decode(c, j, d), v))
                .collect();
            if entries.is_empty() {
                return 0.0;
            }
            let cell_volume = (-f64::from(j) * df).exp2();
            let mut best = 0.0f64;
            let mut total = Compensated::new();
            for (_, v) in &entries {
                total.add(v.powf(p) * cell_volume);
            }
            for (k, phi_k) in coarse.iter().enumerate() {
                if let Some(phi_k) = phi_k {
                    let nu = -(k as f64 + 1.0);
                    best = best.max(phi_k * ((nu * df).exp2() * total.value()).powf(1.0 / p));
                }
            }
            for nu in 0..=j {
                let shift = j - nu;
                let mut groups: HashMap<Vec<u64>, Compensated> = HashMap::new();
                for (m, v) in &entries {
                    let key: Vec<u64> = m.iter().map(|x| x >> shift).collect();
                    groups.entry(key).or_default().add(v.powf(p) * cell_volume);
                }
                let scale = (f64::from(nu) * df).exp2();
                for integral in groups.values() {
                    best = best.max(phi[nu as usize] * (scale * integral.value()).powf(1.0 / p));
                }
            }
            let top = entries.iter().fold(0.0f64, |a, (_, v)| a.max(*v));
            for nu in j + 1..=big_j {
                best = best.max(phi[nu as usize] * top);
            }
            (f64::from(j) * params.s).exp2() * best
        })
        .collect();
    Ok(ell_q(&per_level, params.q))
}

/// Inner `ℓ_q` accumulator of one cube in the Besov-type norm.
#[derive(Clone, Copy, Default)]
struct CubeAcc {
    sum: Compensated,
    max: f64,
}

impl CubeAcc {
    fn push(&mut self, term: f64, q: Exponent) {
        self.max = self.max.max(term);
        if let Exponent::Finite(q) = q {
            self.sum.add(term.powf(q));
        }
    }

    fn value(&self, q: Exponent) -> f64 {
        match q {
            Exponent::Infinity => self.max,
            Exponent::Finite(q) => self.sum.value().powf(1.0 / q),
        }
    }
}

/// Per-cube quantities of the Besov-type norm: for every cube `P = Q_{ν,k}` meeting
/// the support, `φ(ℓ(P)) |P|^{-1/p} (Σ_{j ≥ ν} 2^{j(s−d/p)q} (Σ_{Q_{j,m}⊂P} λ^p)^{q/p})^{1/q}`,
/// indexed by level `ν` and Morton code `k`.
pub(crate) fn b_cube_values(lambda: &DyadicSeq, params: &NormParams) -> Result<Vec<BTreeMap<u128, f64>>> {
    check_dim(lambda, params)?;
    let big_j = lambda.max_level();
    let p = params.p;
    let phi = params.phi_levels(big_j)?;
    let dp = f64::from(lambda.dim()) / p;
    let mut acc: Vec<BTreeMap<u128, CubeAcc>> = vec![BTreeMap::new(); big_j as usize + 1];
    for j in 0..=big_j {
        let weight = (f64::from(j) * (params.s - dp)).exp2();
        for_each_cube_sum(lambda, j, p, |nu, k, sum| {
            let term = weight * sum.powf(1.0 / p);
            acc[nu as usize].entry(k).or_default().push(term, params.q);
        });
    }
    Ok(acc
        .into_iter()
        .enumerate()
        .map(|(nu, cubes)| {
            let outer = phi[nu] * (nu as f64 * dp).exp2();
            cubes.into_iter().map(|(k, a)| (k, outer * a.value(params.q))).collect()
        })
        .collect())
}

/// The `b^{s,φ}_{p,q}` quasi-norm:
/// `sup_P φ(ℓ(P)) |P|^{-1/p} (Σ_{j ≥ j_P} 2^{j(s−d/p)q} (Σ_{Q_{j,m}⊂P} λ^p)^{q/p})^{1/q}`.
pub fn b_norm(lambda: &DyadicSeq, params: &NormParams) -> Result<f64> {
    Ok(b_cube_values(lambda, params)?
        .iter()
        .flat_map(|cubes| cubes.values())
        .fold(0.0f64, |a, &b| a.max(b)))
}

/// Per-cube quantities `(Σ_{j ≥ ν} 2^{jsq} (max_{Q_{j,m}⊂P} λ_{j,m})^q)^{1/q}` of the
/// `b^s_{∞,q}` norm restricted to `P = Q_{ν,k}`.
pub(crate) fn besov_sup_cube_values(lambda: &DyadicSeq, s: f64, q: Exponent) -> Vec<BTreeMap<u128, f64>> {
    let d = lambda.dim();
    let big_j = lambda.max_level();
    let mut acc: Vec<BTreeMap<u128, CubeAcc>> = vec![BTreeMap::new(); big_j as usize + 1];
    for j in 0..=big_j {
        let weight = (f64::from(j) * s).exp2();
        let mut cur: BTreeMap<u128, f64> = lambda.level_entries(j).into_iter().collect();
        for nu in (0..=j).rev() {
            for (&k, &m) in &cur {
                acc[nu as usize].entry(k).or_default().push(weight * m, q);
            }
            let mut next: BTreeMap<u128, f64> = BTreeMap::new();
            for (k, m) in cur {
                let e = next.entry(k >> d).or_insert(0.0);
                *e = e.max(m);
            }
            cur = next;
        }
    }
    acc.into_iter()
        .map(|cubes| cubes.into_iter().map(|(k, a)| (k, a.value(q))).collect())
        .collect()
}

/// `(Σ_j 2^{jsq} (max_m λ_{j,m})^q)^{1/q}`, the norm of `b^s_{∞,q}`.
pub fn besov_sup_norm(lambda: &DyadicSeq, s: f64, q: Exponent) -> f64 {
    let levels: Vec<f64> = (0..=lambda.max_level())
        .map(|j| (f64::from(j) * s).exp2() * lambda.level_max(j))
        .collect();
    ell_q(&levels, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phi::Family;
    use crate::seqspace::DyadicIndex;

    fn params(s: f64, p: f64, q: Exponent, family: Family, d: u32) -> NormParams {
        NormParams::new(s, p, q, PhiSpec::new(family, d).unwrap()).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
    }

    #[test]
    fn ell_q_examples() {
        assert_eq!(ell_q(&[3.0, 4.0], Exponent::Finite(2.0)), 5.0);
        assert_eq!(ell_q(&[3.0, 4.0], Exponent::Infinity), 4.0);
        assert!((ell_q(&[1.0, 1.0, 1.0], Exponent::Finite(0.5)) - 9.0).abs() < 1e-12);
        assert_eq!(ell_q(&[], Exponent::Finite(1.0)), 0.0);
        assert_eq!(ell_q(&[1e300, 1e300], Exponent::Finite(2.0)), 2f64.sqrt() * 1e300);
    }

    #[test]
    fn unit_entry() {
        let mut l = DyadicSeq::new(2, 3).unwrap();
        l.insert(&DyadicIndex::origin(0, 2), 1.0).unwrap();
        let np = params(0.7, 2.0, Exponent::Finite(1.0), Family::Power { u: 3.0 }, 2);
        assert_eq!(n_norm_star(&l, &np).unwrap(), 1.0);
        assert!(rel(n_norm_morrey(&l, &np).unwrap(), 1.0) < 1e-14);
    }

    #[test]
    fn normalized_single_cube_has_unit_norm() {
        let np = params(1.5, 2.0, Exponent::Finite(2.0), Family::PsiCritical { p: 2.0 }, 2);
        for j0 in [1u32, 4, 9] {
            let mut l = DyadicSeq::new(2, 10).unwrap();
            let v = (-f64::from(j0) * 1.5).exp2() / np.phi.eval_level(j0).unwrap();
            l.insert(&DyadicIndex::origin(j0, 2), v).unwrap();
            assert!(rel(n_norm_star(&l, &np).unwrap(), 1.0) < 1e-12);
            assert!(rel(b_norm(&l, &np).unwrap(), 1.0) < 1e-12);
        }
    }

    #[test]
    fn two_levels_by_hand() {
        let (a, b, s, p) = (0.3, 0.8, 0.5, 1.5);
        let np = params(s, p, Exponent::Finite(1.0), Family::Power { u: 1.5 }, 1);
        let mut l = DyadicSeq::new(1, 1).unwrap();
        l.insert(&DyadicIndex::new(0, vec![0]), a).unwrap();
        l.insert(&DyadicIndex::new(1, vec![0]), b).unwrap();
        let phi_half = np.phi.eval(0.5).unwrap();
        let expected = a + s.exp2() * f64::max((-1.0 / p).exp2() * b, phi_half * b);
        assert!(rel(n_norm_star(&l, &np).unwrap(), expected) < 1e-14);
        assert!(rel(n_norm_morrey(&l, &np).unwrap(), expected) < 1e-14);
    }

    #[test]
    fn full_level_telescopes() {
        let j = 4;
        let np = params(0.25, 2.0, Exponent::Infinity, Family::InvLog { a: 3.0 }, 2);
        let mut l = DyadicSeq::new(2, j).unwrap();
        for x in 0..16 {
            for y in 0..16 {
                l.insert(&DyadicIndex::new(j, vec![x, y]), 1.0).unwrap();
            }
        }
        assert!(l.is_dense_level(j));
        let top = (0..=j).map(|nu| np.phi.eval_level(nu).unwrap()).fold(0.0, f64::max);
        let expected = (f64::from(j) * 0.25).exp2() * top;
        assert!(rel(n_norm_star(&l, &np).unwrap(), expected) < 1e-13);
        assert!(rel(n_norm_morrey(&l, &np).unwrap(), expected) < 1e-13);
        assert!(rel(b_norm(&l, &np).unwrap(), expected) < 1e-13);
    }

    #[test]
    fn besov_sup_examples() {
        let mut l = DyadicSeq::new(1, 6).unwrap();
        l.insert(&DyadicIndex::new(3, vec![5]), 1.0).unwrap();
        assert_eq!(besov_sup_norm(&l, 0.5, Exponent::Infinity), 1.5f64.exp2());

        let s = 0.75;
        let mut h = DyadicSeq::new(1, 30).unwrap();
        for j in 1..=30u32 {
            h.insert(&DyadicIndex::new(j, vec![0]), (-f64::from(j) * s).exp2() / f64::from(j)).unwrap();
        }
        let harmonic: f64 = (1..=30).map(|j| 1.0 / f64::from(j)).sum();
        assert!(rel(besov_sup_norm(&h, s, Exponent::Finite(1.0)), harmonic) < 1e-13);
    }

    #[test]
    fn zero_sequence() {
        let l = DyadicSeq::new(1, 4).unwrap();
        let np = params(1.0, 1.0, Exponent::Finite(2.0), Family::Constant, 1);
        assert_eq!(n_norm_star(&l, &np).unwrap(), 0.0);
        assert_eq!(b_norm(&l, &np).unwrap(), 0.0);
        assert_eq!(n_norm_morrey(&l, &np).unwrap(), 0.0);
    }

    #[test]
    fn rejects_weight_outside_the_class() {
        let phi = PhiSpec::new(Family::Power { u: 1.0 }, 1).unwrap();
        assert!(matches!(NormParams::new(0.0, 2.0, Exponent::Infinity, phi), Err(Error::Inadmissible(_))));
    }
}
