mod common;

use hpmp::approx::{
    eulerian_shortcut, feasibility_threshold, l_value, merge_branch, mst_forest, split_branch,
    split_components, RATIO_SLACK,
};
use hpmp::cover::CycleCover;
use hpmp::instance::{format_instance, generate_euclidean, parse_instance, Instance};
use hpmp::oracle::{brute_hpmp, OracleLimitConfig};
use hpmp::two_factor::min_weight_two_factor;
use hpmp::{solve, Error};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

/// Random partition of a shuffled vertex set into cycles of length ≥ 3.
fn random_cover(inst: &Instance, seed: u64) -> CycleCover {
    let mut rng = common::rng(seed);
    let n = inst.n();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut cycles = Vec::new();
    let mut rest = &order[..];
    while !rest.is_empty() {
        let take = if rest.len() < 6 {
            rest.len()
        } else {
            rng.gen_range(3..=rest.len() - 3)
        };
        cycles.push(rest[..take].to_vec());
        rest = &rest[take..];
    }
    CycleCover::new(inst, cycles).unwrap()
}

fn assert_partition(n: usize, cycles: &[Vec<usize>]) {
    let mut seen = vec![false; n];
    for c in cycles {
        assert!(c.len() >= 3);
        for &v in c {
            assert!(!seen[v], "vertex {v} repeated");
            seen[v] = true;
        }
    }
    assert!(seen.iter().all(|&s| s));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn l_value_bounded_on_any_cover(n in 3usize..80, seed in any::<u64>()) {
        let inst = generate_euclidean(n, seed, 100.0).unwrap();
        let cover = random_cover(&inst, seed ^ 0x5eed);
        prop_assert!(l_value(&cover) <= 2 * n.div_ceil(5));
    }

    #[test]
    fn split_reaches_exactly_the_counting_limit(n in 6usize..60, seed in any::<u64>()) {
        let inst = generate_euclidean(n, seed, 100.0).unwrap();
        let cover = random_cover(&inst, seed);
        let reachable = (n - l_value(&cover)) / 3;
        prop_assert!(reachable >= feasibility_threshold(n));
        for p in cover.len()..=reachable {
            let out = split_components(&inst, &cover, p).unwrap();
            prop_assert_eq!(out.pieces.len(), p);
            prop_assert!(out.weight_trace.windows(2).all(|w| w[1] <= w[0] + 1e-9));
        }
        let over = split_components(&inst, &cover, reachable + 1);
        prop_assert!(
            matches!(over, Err(Error::AlgorithmInapplicable { .. })),
            "p beyond reach gave {over:?}"
        );
    }

    #[test]
    fn shortcut_never_exceeds_the_multigraph(n in 9usize..40, seed in any::<u64>()) {
        let inst = generate_euclidean(n, seed, 100.0).unwrap();
        let cover = min_weight_two_factor(&inst).unwrap();
        let q = cover.len();
        for p in 1..=feasibility_threshold(n) {
            let mg = if q > p {
                merge_branch(&cover, &mst_forest(&inst, p).unwrap(), p, &inst).unwrap()
            } else if q < p {
                split_branch(&inst, &cover, p).unwrap()
            } else {
                continue;
            };
            prop_assert!(mg.degrees().iter().all(|d| d % 2 == 0));
            prop_assert_eq!(mg.component_count(), p);
            let h = eulerian_shortcut(&mg, &inst).unwrap();
            prop_assert!(h.weight() <= mg.weight() + 1e-9);
        }
    }

    #[test]
    fn solve_is_valid_and_within_its_ratio(n in 9usize..48, seed in any::<u64>()) {
        let inst = generate_euclidean(n, seed, 100.0).unwrap();
        for p in 1..=feasibility_threshold(n) {
            let (h, report) = solve(&inst, p).unwrap();
            prop_assert_eq!(h.p(), p);
            assert_partition(n, h.cycles());
            prop_assert!((h.weight() - report.ub).abs() < 1e-9);
            prop_assert!(report.lb <= report.ub + 1e-9);
            prop_assert!(report.ub <= f64::from(report.guaranteed_ratio) * report.lb + RATIO_SLACK);
        }
    }

    #[test]
    fn instance_text_round_trips(n in 3usize..30, seed in any::<u64>(), side in 1.0f64..1e6) {
        let inst = generate_euclidean(n, seed, side).unwrap();
        let text = format_instance(&inst);
        let back = parse_instance(&text).unwrap();
        prop_assert_eq!(back.coords(), inst.coords());
        prop_assert_eq!(format_instance(&back), text);
    }
}

#[test]
fn lower_bound_and_ratio_against_exact_optimum() {
    let limits = OracleLimitConfig::default();
    for seed in 0..20 {
        let inst = generate_euclidean(9, seed, 100.0).unwrap();
        for p in 1..=feasibility_threshold(9) {
            let exact = brute_hpmp(&inst, p, &limits).unwrap();
            let (h, report) = solve(&inst, p).unwrap();
            assert!(report.lb <= exact.weight() + 1e-9);
            assert!(exact.weight() <= h.weight() + 1e-9);
            assert!(h.weight() <= 3.0 * exact.weight() + 1e-9);
        }
    }
}

#[test]
fn solve_is_deterministic() {
    let inst = generate_euclidean(60, 3, 100.0).unwrap();
    for p in [1, 5, 12] {
        let (a, _) = solve(&inst, p).unwrap();
        let (b, _) = solve(&inst, p).unwrap();
        assert_eq!(a.cycles(), b.cycles());
    }
}
