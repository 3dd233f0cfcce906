use proptest::prelude::*;
use restarts::submodular::{
    brute_force_submax, greedy, threshold_greedy, threshold_greedy_eval_bound, verify_submodular,
    CountingOracle, Coverage, FnSetFunction, GroundSet, SetFunction,
};

const E: f64 = std::f64::consts::E;

// Coverage value recomputed from the subsets with a bitmask.
fn cover(g: &Coverage, set: &[usize]) -> f64 {
    let mut covered = vec![false; g.universe_size()];
    for &e in set {
        for &j in &g.subsets()[e] {
            covered[j] = true;
        }
    }
    covered
        .iter()
        .zip(g.weights())
        .filter(|(c, _)| **c)
        .map(|(_, w)| w)
        .sum()
}

// Exhaustive optimum over all bitmasks with at most k bits.
fn reference_opt(g: &Coverage, k: usize) -> f64 {
    let n = g.subsets().len();
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize <= k)
        .map(|m| cover(g, &(0..n).filter(|i| m >> i & 1 == 1).collect::<Vec<_>>()))
        .fold(0.0, f64::max)
}

fn max_gain(g: &Coverage, set: &[usize]) -> f64 {
    let base = cover(g, set);
    (0..g.subsets().len())
        .filter(|e| !set.contains(e))
        .map(|e| {
            let mut s = set.to_vec();
            s.push(e);
            cover(g, &s) - base
        })
        .fold(0.0, f64::max)
}

fn battery() -> Vec<(Coverage, usize)> {
    (0..50u64)
        .map(|s| {
            let n = 6 + (s as usize % 10);
            let k = 1 + (s as usize % 4);
            (Coverage::random(n, 2 * n, 1000 + s).unwrap(), k)
        })
        .collect()
}

#[test]
fn greedy_guarantee_and_per_round_inequality() {
    for (g, k) in battery() {
        let n = g.subsets().len();
        let opt = reference_opt(&g, k);
        let oracle = CountingOracle::new(g.clone());
        let sel = greedy(&oracle, k).unwrap();
        assert!(sel.value >= (1.0 - 1.0 / E) * opt - 1e-9);
        assert!(sel.evals_used <= (2 * k * n) as u64);
        assert_eq!(sel.evals_used, oracle.calls());
        assert_eq!(sel.value, cover(&g, &sel.chosen));
        for i in 0..=sel.chosen.len() {
            let prefix = &sel.chosen[..i];
            assert!(opt - cover(&g, prefix) <= k as f64 * max_gain(&g, prefix) + 1e-9);
        }
    }
}

#[test]
fn threshold_greedy_guarantee_and_acceptance_inequality() {
    for (g, k) in battery() {
        let n = g.subsets().len();
        let opt = reference_opt(&g, k);
        for eps in [0.25, 0.1] {
            let oracle = CountingOracle::new(g.clone());
            let sel = threshold_greedy(&oracle, k, eps).unwrap();
            assert!(sel.value >= (1.0 - 1.0 / E - eps) * opt - 1e-9);
            assert!(sel.evals_used <= threshold_greedy_eval_bound(n, eps));
            assert_eq!(sel.evals_used, oracle.calls());
            assert!(sel.chosen.len() <= k);
            for (i, &e) in sel.chosen.iter().enumerate() {
                let prefix = &sel.chosen[..i];
                let gain = cover(&g, &sel.chosen[..=i]) - cover(&g, prefix);
                assert!(
                    gain >= (1.0 - eps) / k as f64 * (opt - cover(&g, prefix)) - 1e-9,
                    "element {e}"
                );
            }
        }
    }
}

#[test]
fn brute_force_agrees_with_reference() {
    for (g, k) in battery().into_iter().take(20) {
        let best = brute_force_submax(&CountingOracle::new(g.clone()), k).unwrap();
        assert_eq!(best.value, reference_opt(&g, k));
        assert_eq!(best.value, cover(&g, &best.chosen));
    }
}

#[test]
fn threshold_greedy_is_cheaper_for_large_budgets() {
    // sparse overlaps: 100 sets of 10 items from 1000
    for seed in 0..5 {
        let g = Coverage::random_uniform(100, 1000, 10, seed).unwrap();
        for k in [10, 20, 50, 100] {
            let slow = greedy(&CountingOracle::new(&g), k).unwrap();
            for eps in [0.25, 0.1] {
                let fast = threshold_greedy(&CountingOracle::new(&g), k, eps).unwrap();
                assert!(
                    fast.evals_used < slow.evals_used,
                    "seed {seed} k {k} eps {eps}"
                );
            }
        }
    }
}

#[test]
fn verifier_separates_coverage_from_square() {
    for (g, _) in battery() {
        assert!(verify_submodular(
            &g,
            &GroundSet::indexed(g.ground_size()).unwrap()
        ));
    }
    let square = FnSetFunction::new(3, |s: &[usize]| (s.len() * s.len()) as f64);
    assert!(!verify_submodular(&square, &GroundSet::indexed(3).unwrap()));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn coverage_matches_reference(n in 1usize..10, u in 1usize..15, seed in any::<u64>(), mask in any::<u16>()) {
        let g = Coverage::random(n, u, seed).unwrap();
        let set: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        prop_assert_eq!(g.value(&set), cover(&g, &set));
    }

    #[test]
    fn counter_is_exact(n in 1usize..12, seed in any::<u64>(), k in 1usize..5, eps in 0.05f64..0.9) {
        let g = Coverage::random(n, 2 * n, seed).unwrap();
        let oracle = CountingOracle::new(&g);
        let a = greedy(&oracle, k).unwrap();
        let b = threshold_greedy(&oracle, k, eps).unwrap();
        prop_assert_eq!(a.evals_used + b.evals_used, oracle.calls());
        prop_assert!(b.evals_used <= threshold_greedy_eval_bound(n, eps));
        let opt = reference_opt(&g, k);
        prop_assert!(b.value >= (1.0 - 1.0 / E - eps) * opt - 1e-9);
    }
}
