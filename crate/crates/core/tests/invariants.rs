mod common;

use common::{random_coverage, random_cut};
use proptest::prelude::*;
use substream::baselines::random_greedy;
use substream::levels::{nesting_violations, reconstruct_levels, LevelFamily, SmoothingRule};
use substream::nonmonotone::run_nonmonotone;
use substream::partition::{partition_stream, window_count};
use substream::{random_permutation, run_monotone, ElementId, StreamConfig, ValueOracle};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn partition_covers_stream(n in 0usize..200, m in 1usize..40, seed in any::<u64>()) {
        let p = partition_stream(n, m, seed).unwrap();
        prop_assert_eq!(p.sizes().iter().sum::<usize>(), n);
        for i in 1..=m {
            for pos in p.range(i) {
                prop_assert_eq!(p.window_of(pos).unwrap(), i);
            }
        }
    }

    #[test]
    fn permutation_is_bijection(n in 1usize..300, seed in any::<u64>()) {
        let o = random_permutation(n, seed).unwrap();
        let mut seen = vec![false; n];
        for e in o.elements() {
            prop_assert!(!seen[e.index()]);
            seen[e.index()] = true;
        }
    }

    #[test]
    fn monotone_invariants(
        seed in any::<u64>(),
        n in 1usize..30,
        k in 1usize..6,
        alpha in 1.0f64..6.0,
        band_const in 0.0f64..2.0,
    ) {
        let cov = random_coverage(seed, n, 24, 0.2);
        let o = ValueOracle::weak(&cov, k);
        let order = random_permutation(n, seed).unwrap();
        let cfg = StreamConfig::new(k, alpha, seed).with_band_const(band_const).with_trace();
        let out = run_monotone(&o, &order, cfg).unwrap();
        let m = window_count(alpha, k);

        prop_assert!(out.history.len() <= m);
        prop_assert!(out.history.entries().windows(2).all(|w| w[0].window < w[1].window));
        prop_assert!(out.stats.max_query_size <= k);
        prop_assert!(out.stats.peak_memory <= m + out.stats.max_window_size);
        prop_assert!(out.levels.set(0).is_empty());
        for (l, s) in out.levels.sets().iter().enumerate() {
            prop_assert!(s.len() <= l);
        }
        prop_assert!(out.levels.verify_cache(&ValueOracle::strong(&cov)).unwrap());

        let mut prev = LevelFamily::empty(k);
        for t in out.trace.as_ref().unwrap() {
            prop_assert!(nesting_violations(&prev, &t.levels, None).is_empty(), "window {}", t.window);
            prop_assert!(t.levels.values().windows(2).all(|w| w[0] <= w[1]));
            if let Some((lo, hi)) = t.band {
                let before: f64 = (lo..=hi).map(|l| prev.value(l + 1)).sum();
                let after: f64 = (lo..=hi).map(|l| t.levels.value(l + 1)).sum();
                prop_assert!(after >= before);
                if t.accepted {
                    prop_assert!(after > before);
                }
            }
            prev = t.levels.clone();
        }

        let replay = ValueOracle::weak(&cov, k);
        let rebuilt = reconstruct_levels(&out.history, &replay, k, SmoothingRule::Greedy).unwrap();
        prop_assert_eq!(&rebuilt, &out.levels);
        prop_assert!(replay.query_count() <= ((k + 2) * out.history.entries().len()) as u64);
    }

    #[test]
    fn nonmonotone_invariants(
        seed in any::<u64>(),
        n in 1usize..14,
        k in 1usize..4,
        alpha in 1.0f64..4.0,
        band_const in 0.0f64..1.0,
    ) {
        let g = random_cut(seed, n, 0.4);
        let o = ValueOracle::weak(&g, k);
        let order = random_permutation(n, seed).unwrap();
        let cfg = StreamConfig::new(k, alpha, seed).with_band_const(band_const).with_trace();
        let out = run_nonmonotone(&o, &order, cfg).unwrap();
        let m = window_count(alpha, k);
        prop_assert_eq!(out.records.len(), m);
        prop_assert!(out.outcome.history.len() <= m);
        prop_assert!(out.outcome.stats.max_query_size <= k);
        for d in out.draws.as_ref().unwrap() {
            prop_assert!(d.threshold > 0.0 && d.threshold <= 1.0);
            if d.window == 1 {
                prop_assert_eq!(d.threshold, 1.0);
            }
        }
        let mut prev = LevelFamily::empty(k);
        for t in out.outcome.trace.as_ref().unwrap() {
            let skip = Some(cfg.band().touched_band(t.window));
            prop_assert!(nesting_violations(&prev, &t.levels, skip).is_empty());
            prop_assert!(t.levels.values()[1..].windows(2).all(|w| w[0] <= w[1]));
            prev = t.levels.clone();
        }
        prop_assert_eq!(out.replay.total_evals(), o.query_count());
        let rebuilt = reconstruct_levels(&out.outcome.history, &ValueOracle::strong(&g), k, SmoothingRule::Copy).unwrap();
        prop_assert_eq!(&rebuilt, &out.outcome.levels);
    }

    #[test]
    fn random_greedy_adds_only_positive_marginals(seed in any::<u64>(), n in 1usize..12, k in 1usize..5) {
        let g = random_cut(seed, n, 0.5);
        let o = ValueOracle::strong(&g);
        let s = random_greedy(&o, n, k, seed).unwrap();
        prop_assert!(s.set.len() <= k);
        let mut prefix: Vec<ElementId> = Vec::new();
        let mut value = 0.0;
        for &e in &s.set {
            prefix.push(e);
            let v = o.eval(&prefix).unwrap();
            prop_assert!(v > value);
            value = v;
        }
    }
}

#[test]
fn monotone_ratio_on_tiny_coverage() {
    let cov = random_coverage(12, 8, 10, 0.3);
    let o = ValueOracle::strong(&cov);
    let (_, opt) = substream::brute_force_opt(&o, 8, 3).unwrap();
    let runs = 500;
    let mut total = 0.0;
    for s in 0..runs {
        let w = ValueOracle::weak(&cov, 3);
        let order = random_permutation(8, s).unwrap();
        total += run_monotone(&w, &order, StreamConfig::new(3, 8.0, s)).unwrap().best_value / opt;
    }
    assert!(total / runs as f64 >= 0.63, "{}", total / runs as f64);
}

#[test]
fn replay_cost_grows_with_window() {
    let g = random_cut(1, 40, 0.2);
    let (k, alpha) = (3, 4.0);
    let m = window_count(alpha, k);
    let mut first_half = (0.0, 0usize);
    let mut second_half = (0.0, 0usize);
    for seed in 0..30 {
        let o = ValueOracle::weak(&g, k);
        let order = random_permutation(40, seed).unwrap();
        let out = run_nonmonotone(&o, &order, StreamConfig::new(k, alpha, seed)).unwrap();
        for (i, c) in out.replay.mean_by_window(m).into_iter().enumerate() {
            if let Some(c) = c {
                let half = if i < m / 2 { &mut first_half } else { &mut second_half };
                half.0 += c;
                half.1 += 1;
            }
        }
        assert!(out.replay.per_element.iter().filter(|c| c.window == 1).all(|c| c.evals == 0));
    }
    assert!(first_half.0 / first_half.1 as f64 <= second_half.0 / second_half.1 as f64);
}
