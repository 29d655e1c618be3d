use proptest::prelude::*;

use shadowlab::colex::{colex_rank, colex_unrank, initial_segment, SegmentKind, SegmentMethod, SegmentSpec};
use shadowlab::combinatorics::{cascade_generalized, em_size, shadow_size_em_segment};
use shadowlab::setfamily::{
    ell_shadow, is_shifted, matching_number, shift_closure, shift_ij, Combinations, Family, KSet,
};
use shadowlab::verify::{check_kruskal_katona, Mode, SearchOptions};

/// A random subfamily of `C([n],k)` picked by a bit mask over the layer.
fn subfamily(n: u32, k: u32, mask: &[bool]) -> Family {
    let layer: Vec<KSet> = Combinations::new(n, k).collect();
    let members = layer.iter().zip(mask.iter().cycle()).filter(|(_, &keep)| keep).map(|(&a, _)| a);
    Family::new(n, k, members).unwrap()
}

fn full_prefix(n: u32, k: u32, m: usize) -> Family {
    initial_segment(&SegmentSpec::new(SegmentKind::Full, n, k, m as u128), SegmentMethod::Filter).unwrap()
}

proptest! {
    #[test]
    fn cascade_round_trip(k in 1u32..=5, s in 0u32..=5, t_raw in 0u32..=5, m in 1u128..=3000) {
        let t = t_raw.min(k).min(s);
        prop_assume!(t < k);
        let rep = cascade_generalized(m, k, s, t).unwrap();
        prop_assert!(rep.check_invariants().is_ok());
        prop_assert_eq!(rep.evaluate().unwrap(), m);
        let n = (k.max(s)..=64).find(|&n| em_size(n as u64, k, s, t).unwrap() >= m);
        prop_assume!(n.is_some());
        let n = n.unwrap();
        let kind = if t == 0 { SegmentKind::Full } else { SegmentKind::Em { s, t } };
        let seg = initial_segment(&SegmentSpec::new(kind, n, k, m), SegmentMethod::Both).unwrap();
        prop_assert_eq!(seg.len() as u128, m);
        prop_assert!(is_shifted(&seg));
        if k >= 2 {
            let direct = ell_shadow(&seg, 1).unwrap().len() as u128;
            prop_assert_eq!(shadow_size_em_segment(m, k, s, t, 1).unwrap(), direct);
        }
    }

    #[test]
    fn rank_round_trip(bits in 1u64..(1 << 20)) {
        let a = KSet::from_bits(bits);
        prop_assert_eq!(colex_unrank(colex_rank(a), a.len()).unwrap(), a);
    }

    #[test]
    fn colex_prefix_minimises_shadow(n in 4u32..=8, k in 2u32..=4, mask in prop::collection::vec(any::<bool>(), 1..40)) {
        prop_assume!(k < n);
        let f = subfamily(n, k, &mask);
        prop_assume!(!f.is_empty());
        let seg = full_prefix(n, k, f.len());
        for ell in 1..k {
            prop_assert!(ell_shadow(&f, ell).unwrap().len() >= ell_shadow(&seg, ell).unwrap().len());
        }
    }

    #[test]
    fn shifting_is_monotone(n in 4u32..=9, k in 2u32..=4, mask in prop::collection::vec(any::<bool>(), 1..30), i in 1u32..=9, j in 1u32..=9) {
        prop_assume!(k < n && i < j && j <= n);
        let f = subfamily(n, k, &mask);
        let g = shift_ij(&f, i, j).unwrap();
        prop_assert_eq!(g.len(), f.len());
        prop_assert!(matching_number(&g) <= matching_number(&f));
        prop_assert!(ell_shadow(&g, 1).unwrap().len() <= ell_shadow(&f, 1).unwrap().len());
        if f.is_t_intersecting(1) {
            prop_assert!(g.is_t_intersecting(1));
        }
        let c = shift_closure(&f);
        prop_assert!(is_shifted(&c));
        prop_assert_eq!(c.len(), f.len());
    }

    #[test]
    fn randomized_reports_carry_their_seed(seed in any::<u64>()) {
        let mode = Mode::Randomized { seed, trials: 20 };
        let r = check_kruskal_katona(6, 3, 1, mode, &SearchOptions::default()).unwrap();
        prop_assert_eq!(r.mode.seed.clone(), Some(seed.to_string()));
        prop_assert!(r.is_well_formed());
        let again = check_kruskal_katona(6, 3, 1, mode, &SearchOptions { jobs: 2, ..Default::default() }).unwrap();
        prop_assert_eq!(r.to_json(), again.to_json());
    }
}
