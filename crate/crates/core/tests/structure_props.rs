//! Dual structure, merging and reduction properties on seeded instances.

use atspp_core::instances::{gen_random, nw_to_unweighted, random_covering_walks, RandomSpec};
use atspp_core::merge::{merge_walks, MergeMode};
use atspp_core::rational::{frac, int};
use atspp_core::relaxation::{
    check_complementary_slackness, is_laminar, min_gap_dual, normalize, solve_relaxation, uncross_dual, verify_dual,
};
use atspp_core::structure::{avoidable, two_cut_respecting_paths};
use atspp_core::walk::walk_cost_and_check;
use atspp_core::Rational;
use proptest::prelude::*;

fn path_spec(n: usize, seed: u64, node_weighted: bool) -> RandomSpec {
    RandomSpec { n, edge_probability: 0.5, cost_bound: 12, seed, node_weighted, path_mode: true }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn uncrossing_keeps_objective(n in 3usize..=8, seed in 0u64..100_000) {
        let inst = gen_random(&path_spec(n, seed, false)).unwrap();
        let (lp, dual) = solve_relaxation(&inst).unwrap();
        let unc = uncross_dual(&inst, &dual).unwrap();
        prop_assert!(is_laminar(unc.support()));
        prop_assert_eq!(&unc.a, &dual.a);
        prop_assert_eq!(&unc.objective, &lp.objective);
        verify_dual(&inst, &unc).unwrap();
        check_complementary_slackness(&inst, &lp, &unc).unwrap();
    }

    #[test]
    fn min_gap_support_is_avoidable(n in 3usize..=8, seed in 0u64..100_000) {
        let norm = normalize(&gen_random(&path_spec(n, seed, false)).unwrap()).unwrap();
        let gap = min_gap_dual(&norm.instance, &norm.lp).unwrap();
        let z = &norm.lp.objective;
        prop_assert!(-z <= gap.delta && &gap.delta <= z);
        prop_assert_eq!(gap.dual.gap(&norm.instance).unwrap(), gap.delta.clone());
        for set in gap.dual.support() {
            prop_assert!(avoidable(&norm.instance, set).unwrap());
        }
        two_cut_respecting_paths(&norm.instance, &norm.lp, &gap.dual).unwrap();
    }

    #[test]
    fn merge_stays_within_bound(n in 3usize..=8, seed in 0u64..100_000, k in 1usize..=4, weighted in any::<bool>()) {
        let norm = normalize(&gen_random(&path_spec(n, seed, weighted)).unwrap()).unwrap();
        let support = &norm.instance;
        let gap = min_gap_dual(support, &norm.lp).unwrap();
        let walks = random_covering_walks(support, k, seed).unwrap();
        let l: Rational = walks.iter().map(|w| walk_cost_and_check(support, w, false).unwrap()).sum();
        let mode = if weighted { MergeMode::NodeWeighted } else { MergeMode::General };
        let out = merge_walks(support, &gap.dual, &walks, mode).unwrap();
        let cost = walk_cost_and_check(support, &out.walk, true).unwrap();
        let km1 = int(k as i64 - 1);
        prop_assert!(cost <= &l + &km1 * (&norm.lp.objective + int(2) * &gap.delta));
        if weighted {
            prop_assert!(cost <= &l + &km1 * &norm.lp.objective);
        }
    }

    #[test]
    fn reduction_sandwiches_lp(n in 2usize..=4, seed in 0u64..100_000, half in any::<bool>()) {
        let spec = RandomSpec { n, edge_probability: 0.6, cost_bound: 5, seed, node_weighted: true, path_mode: false };
        let inst = gen_random(&spec).unwrap();
        let eps = if half { frac(1, 2) } else { frac(1, 4) };
        let (red, map) = nw_to_unweighted(&inst, &eps).unwrap();
        let (lp, _) = solve_relaxation(&inst).unwrap();
        let (lp_red, _) = solve_relaxation(&red).unwrap();
        let scaled = &map.scale * &lp_red.objective;
        prop_assert!(lp.objective <= scaled);
        prop_assert!(scaled <= (int(1) + &eps) * &lp.objective);
    }
}
