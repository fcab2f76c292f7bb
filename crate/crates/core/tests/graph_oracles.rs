mod common;

use std::collections::BTreeSet;

use blotto_core::bounds::{opponent_bounds, table_bounds, BattlefieldOutcome};
use blotto_core::game::payoff_vector;
use blotto_core::{AllocationBounds, BoundFlags, DecisionGraph};
use common::{binomial, compositions, random_decision};
use num_bigint::BigUint;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn path_set(g: &DecisionGraph) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    g.for_each_path(|p| out.push(p.to_vec()));
    out
}

#[test]
fn paths_are_exactly_the_compositions() {
    for k in 1..=4 {
        for n in 0..=8 {
            let g = DecisionGraph::new(k, n).unwrap();
            let paths = path_set(&g);
            let unique: BTreeSet<_> = paths.iter().cloned().collect();
            assert_eq!(unique.len(), paths.len(), "duplicate path at K={k} N={n}");
            let brute: BTreeSet<_> = compositions(k, n).into_iter().collect();
            assert_eq!(unique, brute, "K={k} N={n}");
            assert_eq!(g.count_decisions(), BigUint::from(paths.len()));
            assert_eq!(paths.len() as u64, binomial(u64::from(n) + k as u64 - 1, k as u64 - 1));
        }
    }
}

#[test]
fn experiment_decision_counts() {
    for (k, n, expected) in [(3, 10, 66u32), (3, 15, 136), (5, 15, 3876), (5, 20, 10626)] {
        assert_eq!(
            DecisionGraph::new(k, n).unwrap().count_decisions(),
            BigUint::from(expected)
        );
    }
}

#[test]
fn bound_pruning_matches_brute_force_filter() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..500 {
        let k = rng.gen_range(1..=4);
        let n = rng.gen_range(0..=10);
        let lower: Vec<i64> = (0..k).map(|_| rng.gen_range(-2..=i64::from(n) + 1)).collect();
        let upper: Vec<i64> = (0..k).map(|_| rng.gen_range(-1..=i64::from(n) + 2)).collect();
        let bounds = AllocationBounds::new(lower.clone(), upper.clone()).unwrap();
        let g = DecisionGraph::new(k, n).unwrap();
        let pruned = g.prune_by_bounds(&bounds).unwrap().prune_dead_ends();
        let got: BTreeSet<_> = path_set(&pruned).into_iter().collect();
        let want: BTreeSet<_> = compositions(k, n)
            .into_iter()
            .filter(|v| {
                v.iter()
                    .enumerate()
                    .all(|(i, &a)| lower[i] <= i64::from(a) && i64::from(a) <= upper[i])
            })
            .collect();
        assert_eq!(got, want, "bounds {lower:?}..{upper:?}");
    }
}

#[test]
fn semi_bandit_pipeline_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..1000 {
        let k = rng.gen_range(1..=4);
        let n_p = rng.gen_range(1..=10);
        let n_opp = rng.gen_range(1..=10);
        let delta = rng.gen_range(0..=1);
        let pi = random_decision(&mut rng, k, n_p);
        let phi = random_decision(&mut rng, k, n_opp);
        let observed = payoff_vector(&pi, &phi, delta).unwrap();
        let outcome = BattlefieldOutcome::from_payoff(&observed);
        let bounds = table_bounds(&pi, &outcome, delta, n_opp).unwrap();
        let pruned = DecisionGraph::new(k, n_opp)
            .unwrap()
            .prune_by_bounds(&bounds)
            .unwrap()
            .prune_dead_ends();
        let got: BTreeSet<_> = path_set(&pruned).into_iter().collect();
        let want: BTreeSet<_> = compositions(k, n_opp)
            .into_iter()
            .filter(|v| {
                let cand = blotto_core::Decision::new(v.clone(), n_opp).unwrap();
                payoff_vector(&pi, &cand, delta).unwrap() == observed
            })
            .collect();
        assert_eq!(got, want, "pi={pi} phi={phi} delta={delta}");
        assert!(got.contains(phi.allocations()));

        let strong = opponent_bounds(&pi, &outcome, delta, n_opp, BoundFlags::ALL).unwrap();
        let pruned = DecisionGraph::new(k, n_opp)
            .unwrap()
            .prune_by_bounds(&strong)
            .unwrap()
            .prune_dead_ends();
        let got_strong: BTreeSet<_> = path_set(&pruned).into_iter().collect();
        assert_eq!(got_strong, want, "stronger bounds changed the set: pi={pi} phi={phi}");
    }
}

proptest! {
    #[test]
    fn dead_end_pruning_is_idempotent(
        k in 1usize..=4,
        n in 0u32..=8,
        seed in any::<u64>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lower: Vec<i64> = (0..k).map(|_| rng.gen_range(0..=i64::from(n))).collect();
        let upper: Vec<i64> = lower.iter().map(|&l| l + rng.gen_range(0..=i64::from(n))).collect();
        let bounds = AllocationBounds::new(lower, upper).unwrap();
        let once = DecisionGraph::new(k, n).unwrap().prune_by_bounds(&bounds).unwrap().prune_dead_ends();
        prop_assert_eq!(once.prune_dead_ends(), once.clone());
        let trimmed = once.prune_unreachable();
        prop_assert_eq!(trimmed.count_decisions(), once.count_decisions());
        prop_assert_eq!(path_set(&trimmed), path_set(&once));
    }

    #[test]
    fn uniform_sampling_only_returns_paths(k in 1usize..=4, n in 0u32..=8, seed in any::<u64>()) {
        let g = DecisionGraph::new(k, n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = g.sample_uniform(&mut rng).unwrap();
        prop_assert_eq!(d.resources(), n);
        prop_assert_eq!(d.battlefields(), k);
    }
}

#[test]
fn uniform_sampling_passes_chi_square() {
    let table = DecisionGraph::new(3, 4).unwrap().path_counts();
    let all = DecisionGraph::new(3, 4).unwrap().decisions();
    let index: std::collections::HashMap<_, _> = all.iter().enumerate().map(|(i, d)| (d.clone(), i)).collect();
    let mut counts = vec![0u64; all.len()];
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let draws = 100_000u64;
    for _ in 0..draws {
        counts[index[&table.sample(&mut rng).unwrap()]] += 1;
    }
    let expected = draws as f64 / all.len() as f64;
    let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    // 99th percentile of chi-square with 14 degrees of freedom.
    assert!(chi2 < 29.141, "chi2 = {chi2}");
}
