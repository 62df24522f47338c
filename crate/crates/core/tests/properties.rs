use morrey_embed::acceptance::menu_for;
use morrey_embed::indices::{
    alpha_seq, dominance_check, ellq_membership, sigma, sigma_bar, sigma_inf, PairContext,
};
use morrey_embed::phi::{validate_gp, Family, PhiSpec};
use morrey_embed::seqspace::{b_norm, morton_decode, morton_encode, n_norm_morrey, n_norm_star, NormParams};
use morrey_embed::verdict::{decide, SpaceSpec};
use morrey_embed::witness::{gn_check, random_seq, Distribution, GnSecond};
use morrey_embed::{Exponent, RateTerm, Tri};
use proptest::prelude::*;

fn p_value() -> impl Strategy<Value = f64> {
    prop::sample::select(vec![0.5, 1.0, 2.0, 3.0, 4.0])
}

fn q_value() -> impl Strategy<Value = Exponent> {
    prop::sample::select(vec![
        Exponent::Finite(0.5),
        Exponent::Finite(1.0),
        Exponent::Finite(2.0),
        Exponent::Infinity,
    ])
}

/// `(d, p, φ)` with `φ ∈ G_p`.
fn weight() -> impl Strategy<Value = (u32, f64, Family)> {
    (1u32..=2, p_value(), any::<prop::sample::Index>()).prop_map(|(d, p, i)| {
        let menu = menu_for(p, d);
        let f = i.get(&menu).clone();
        (d, p, f)
    })
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn weights_are_positive_normalized_and_doubling((d, p, f) in weight(), t in 1e-6f64..1e3) {
        let phi = PhiSpec::normalized(f, d).unwrap();
        prop_assert_eq!(phi.eval_level(0).unwrap(), 1.0);
        if !matches!(phi.family(), Family::Tabulated { .. }) {
            prop_assert!(phi.eval(t).unwrap() > 0.0);
        }
        prop_assert!(validate_gp(&phi, p, 64).unwrap().ok());
        let s = phi.dyadic_samples(64).unwrap();
        let dp = (f64::from(d) / p).exp2();
        for w in s.windows(2) {
            prop_assert!(w[1] <= w[0] * (1.0 + 1e-12) && w[0] <= dp * w[1] * (1.0 + 1e-12));
        }
        let r = phi.rate();
        prop_assert!(r.beta >= -1e-12 && r.beta <= f64::from(d) / p + 1e-12);
    }

    #[test]
    fn rate_slope_matches_samples((d, _p, f) in weight()) {
        let phi = PhiSpec::normalized(f, d).unwrap();
        prop_assume!(!matches!(phi.family(), Family::Tabulated { .. }));
        let s = phi.dyadic_samples(200).unwrap();
        let slope = (s[200].log2() - s[150].log2()) / 50.0;
        prop_assert!((slope + phi.rate().beta).abs() <= 0.02, "slope {} rate {:?}", slope, phi.rate());
    }

    #[test]
    fn rate_composition(b1 in -3.0f64..3.0, g1 in -3.0f64..3.0, b2 in -3.0f64..3.0, g2 in -3.0f64..3.0, r in -2.0f64..2.0) {
        let m = RateTerm::new(b1, g1).mul(RateTerm::new(b2, g2));
        prop_assert!((m.beta - (b1 + b2)).abs() < 1e-12 && (m.gamma - (g1 + g2)).abs() < 1e-12);
        let pw = RateTerm::new(b1, g1).powf(r);
        prop_assert!((pw.beta - r * b1).abs() < 1e-12 && (pw.gamma - r * g1).abs() < 1e-12);
    }

    #[test]
    fn morton_round_trip(j in 0u32..20, a in any::<u64>(), b in any::<u64>()) {
        let m = vec![a % (1 << j), b % (1 << j)];
        prop_assert_eq!(morton_decode(morton_encode(&m, j), j, 2), m);
    }

    #[test]
    fn norm_orderings(
        (d, p, f) in weight(),
        q in q_value(),
        s in -1.0f64..1.0,
        seed in any::<u64>(),
        big_j in 0u32..5,
        density in 0.05f64..1.0,
        c in 0.01f64..100.0,
    ) {
        let prm = NormParams::new(s, p, q, PhiSpec::new(f, d).unwrap()).unwrap();
        let lambda = random_seq(seed, d, big_j, density, Distribution::Uniform01).unwrap();
        let star = n_norm_star(&lambda, &prm).unwrap();
        prop_assert!(rel(star, n_norm_morrey(&lambda, &prm).unwrap()) <= 1e-12);
        let b = b_norm(&lambda, &prm).unwrap();
        prop_assert!(b <= star * (1.0 + 1e-12));
        let inf = prm.with_q(Exponent::Infinity);
        prop_assert!(rel(b_norm(&lambda, &inf).unwrap(), n_norm_star(&lambda, &inf).unwrap()) <= 1e-12);
        let scaled = lambda.scale(c);
        prop_assert!(rel(n_norm_star(&scaled, &prm).unwrap(), c * star) <= 1e-12);
        prop_assert!(rel(b_norm(&scaled, &prm).unwrap(), c * b) <= 1e-12);
    }

    #[test]
    fn sequence_entries_stay_in_unit_cube(seed in any::<u64>(), d in 1u32..=3, big_j in 0u32..5) {
        let lambda = random_seq(seed, d, big_j, 0.3, Distribution::DyadicDecaying).unwrap();
        for (idx, v) in lambda.iter() {
            prop_assert!(idx.j <= big_j && v >= 0.0);
            prop_assert!(idx.m.iter().all(|&m| m < 1 << idx.j));
        }
    }

    #[test]
    fn membership_sign_of_beta(beta in 0.001f64..5.0, gamma in -5.0f64..5.0, q in q_value()) {
        let yes = ellq_membership(RateTerm::new(beta, gamma), q);
        prop_assert_eq!((yes.lq, yes.c0), (Tri::Yes, Tri::Yes));
        let no = ellq_membership(RateTerm::new(-beta, gamma), q);
        prop_assert_eq!((no.lq, no.c0), (Tri::No, Tri::No));
    }

    #[test]
    fn pair_indices(
        (d, p1, f1) in weight(),
        (p2, i2) in (p_value(), any::<prop::sample::Index>()),
        q1 in q_value(),
        q2 in q_value(),
        s1 in -2.0f64..2.0,
    ) {
        let phi1 = PhiSpec::normalized(f1, d).unwrap();
        let phi2 = PhiSpec::normalized(i2.get(&menu_for(p2, d)).clone(), d).unwrap();
        let ctx = PairContext::new(p1, q1, &phi1, p2, q2, &phi2).unwrap();
        prop_assert!(ctx.rho > 0.0 && ctx.rho <= 1.0);
        prop_assert_eq!(ctx.qstar == Exponent::Infinity, q1.recip() >= q2.recip());
        let alpha = alpha_seq(&ctx, 40).unwrap();
        prop_assert!((alpha[0] - 1.0).abs() < 1e-12);
        prop_assert!(alpha.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-12)));
        let df = f64::from(d);
        let sg = sigma(s1, &phi1, ctx.rho);
        prop_assert!(sg <= s1 + 1e-9 && sg >= s1 - df / p1 * (1.0 - ctx.rho) - 1e-9);
        let si = sigma_inf(s1, &phi1);
        prop_assert!(si <= s1 + 1e-9 && si >= s1 - df / p1 - 1e-9);
        if dominance_check(&ctx, 64).unwrap().class.geq() {
            let sb = sigma_bar(s1, &ctx).unwrap();
            prop_assert!(sb <= sg + 1e-9 && sb >= s1 - df / p1 - 1e-9);
        }
    }

    #[test]
    fn verdict_invariants(
        (d, p1, f1) in weight(),
        (p2, i2) in (p_value(), any::<prop::sample::Index>()),
        q1 in q_value(),
        q2 in q_value(),
        s1 in -2.0f64..2.0,
        ds in -1.0f64..3.0,
    ) {
        let f2 = i2.get(&menu_for(p2, d)).clone();
        let src = SpaceSpec::n(d, s1, p1, q1, f1).unwrap();
        let tgt = SpaceSpec::n(d, s1 - ds, p2, q2, f2).unwrap();
        let v = decide(&src, &tgt).unwrap();
        prop_assert!(v.compact != Tri::Yes || v.continuous == Tri::Yes);
        let same = decide(&src, &tgt.with_s(s1)).unwrap();
        prop_assert!(same.compact != Tri::Yes);
        if v.continuous == Tri::Yes {
            for lower in [0.1, 0.5, 2.0] {
                let w = decide(&src, &tgt.with_s(s1 - ds - lower)).unwrap();
                prop_assert_eq!(w.continuous, Tri::Yes);
            }
        }
    }

    #[test]
    fn interpolation_inequality(
        (d, p, f) in weight(),
        q in q_value(),
        s in 0.0f64..2.0,
        drop in 0.1f64..2.0,
        theta in 0.05f64..0.95,
        seed in any::<u64>(),
        big_j in 0u32..4,
    ) {
        let first = NormParams::new(s, p, q, PhiSpec::new(f, d).unwrap()).unwrap();
        let lambda = random_seq(seed, d, big_j, 0.5, Distribution::Uniform01).unwrap();
        let r = gn_check(&lambda, &first, &GnSecond::Sup { s: s - drop, q: Exponent::Infinity }, theta).unwrap();
        prop_assert!(r.max_cube_ratio <= 1.0 + 1e-12);
        prop_assert!(r.ratio <= 1.0 + 1e-9);
    }
}
