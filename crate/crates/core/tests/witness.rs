use morrey_embed::acceptance::{compact_tuples, noncompact_tuples};
use morrey_embed::indices::{xi_seq, PairContext};
use morrey_embed::verdict::{decide_n, Scale};
use morrey_embed::witness::{run_witness, Construction, Plan};
use morrey_embed::Tri;

#[test]
fn compact_gaps_follow_xi() {
    let big_j = 40;
    let mut checked = 0;
    for (src, tgt) in compact_tuples() {
        if src.scale != Scale::N || tgt.scale != Scale::N {
            continue;
        }
        let r = run_witness(&src, &tgt, big_j, 7).unwrap();
        let probe = r.probe.expect("compact tuples have a family");
        assert!(matches!(r.plan, Plan::Build { construction: Construction::SingleCube { .. } }));
        let ctx = PairContext::new(src.p.value(), src.q, &src.phi, tgt.p.value(), tgt.q, &tgt.phi).unwrap();
        let xi = xi_seq(&ctx, src.s, tgt.s, big_j).unwrap();
        for (k, gap) in probe.consecutive_gaps.iter().enumerate() {
            let j = probe.levels[k] as usize;
            assert!(*gap <= 2.0 * xi[j] * (1.0 + 1e-12), "{} -> {}: gap {gap} at level {j}, xi {}", src.label(), tgt.label(), xi[j]);
        }
        assert!(xi[*probe.levels.last().unwrap() as usize] < xi[probe.levels[0] as usize]);
        checked += 1;
    }
    assert!(checked >= 8);
}

#[test]
fn noncompact_members_are_bounded() {
    for (src, tgt) in noncompact_tuples() {
        assert_eq!(decide_n(&src, &tgt).unwrap().compact, Tri::No);
        let r = run_witness(&src, &tgt, 40, 6).unwrap();
        let probe = r.probe.unwrap();
        assert_eq!(probe.members, 6);
        assert!(probe.max_source_norm <= 2.0);
        assert_eq!(r.separated, Some(true));
    }
}
