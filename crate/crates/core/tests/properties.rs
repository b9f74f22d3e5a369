//! Property-based invariants over randomly generated instances.

use ballcover_core::harness::{
    generate, rows_from_csv, rows_to_csv, ExperimentRow, Generator, InstanceSpec,
};
use ballcover_core::kcluster::budget_dp;
use ballcover_core::mcc::exact_mcc;
use ballcover_core::metric::{candidate_balls, Ball, BallMode, Cover, MetricInstance, Role};
use ballcover_core::partition::{frt_partition, rand_partition};
use proptest::prelude::*;

fn euclidean_strategy() -> impl Strategy<Value = Vec<Vec<f64>>> {
    (2usize..8, 1usize..4).prop_flat_map(|(n, dim)| {
        prop::collection::vec(prop::collection::vec(0.0f64..10.0, dim..=dim), n..=n)
    })
}

fn build_euclidean(coords: &[Vec<f64>]) -> MetricInstance {
    MetricInstance::from_euclidean(vec![Role::Both; coords.len()], coords, 1.0).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn euclidean_instances_satisfy_metric_axioms(coords in euclidean_strategy()) {
        // Construction validates symmetry, diagonal, and triangle inequality.
        let inst = build_euclidean(&coords);
        prop_assert_eq!(inst.num_points(), coords.len());
    }

    #[test]
    fn random_metric_generator_always_validates(seed in 0u64..5000, n in 2usize..8, m in 0usize..4) {
        let spec = InstanceSpec {
            generator: Generator::RandomMetric { n, m },
            seed,
            alpha: 1.0,
            normalize: false,
        };
        prop_assert!(generate(&spec).is_ok());
    }

    #[test]
    fn diam_is_monotone_under_inclusion(coords in euclidean_strategy(), split in 1usize..7) {
        let inst = build_euclidean(&coords);
        let all = inst.all_points();
        let k = split.min(all.len());
        let subset = &all[..k];
        prop_assert!(inst.diam(subset).unwrap() <= inst.diam(&all).unwrap() + 1e-12);
    }

    #[test]
    fn candidate_balls_deterministic_sorted_deduped(coords in euclidean_strategy()) {
        let inst = build_euclidean(&coords);
        let a = candidate_balls(&inst, BallMode::Kcluster).unwrap();
        let b = candidate_balls(&inst, BallMode::Kcluster).unwrap();
        prop_assert_eq!(a.balls(), b.balls());
        let mut sorted = a.balls().to_vec();
        sorted.sort_by_key(|b| (b.center, b.radius.to_bits()));
        prop_assert_eq!(&sorted[..], a.balls());
        sorted.dedup_by_key(|b| (b.center, b.radius.to_bits()));
        prop_assert_eq!(sorted.len(), a.len());
        // Every radius is a realized client distance from its center.
        let clients = inst.clients();
        for ball in a.balls() {
            prop_assert!(clients.iter().any(|&x| inst.d(ball.center, x) == ball.radius));
        }
    }

    #[test]
    fn partitions_satisfy_invariants_both_schemes(coords in euclidean_strategy(), seed in 0u64..10_000) {
        let inst = build_euclidean(&coords);
        let all = inst.all_points();
        // Constructors re-validate; explicit validation double-checks.
        let p = rand_partition(&inst, &all, all.len(), seed).unwrap();
        p.validate(&inst, &all).unwrap();
        let p = frt_partition(&inst, &all, seed).unwrap();
        p.validate(&inst, &all).unwrap();
    }

    #[test]
    fn partitions_reproducible_given_seed(coords in euclidean_strategy(), seed in 0u64..10_000) {
        let inst = build_euclidean(&coords);
        let all = inst.all_points();
        let a = rand_partition(&inst, &all, all.len(), seed).unwrap();
        let b = rand_partition(&inst, &all, all.len(), seed).unwrap();
        prop_assert_eq!(a.blocks, b.blocks);
        let a = frt_partition(&inst, &all, seed).unwrap();
        let b = frt_partition(&inst, &all, seed).unwrap();
        prop_assert_eq!(a.blocks, b.blocks);
    }

    #[test]
    fn exact_cover_uses_candidate_balls_only(seed in 0u64..2000) {
        let spec = InstanceSpec {
            generator: Generator::RandomMetric { n: 5, m: 3 },
            seed,
            alpha: 1.0,
            normalize: false,
        };
        let g = generate(&spec).unwrap();
        let cands = candidate_balls(&g.instance, BallMode::Mcc).unwrap();
        let cover = exact_mcc(&g.instance, &g.instance.clients(), None).unwrap();
        for ball in cover.balls() {
            prop_assert!(cands.contains(ball));
        }
    }

    #[test]
    fn csv_round_trip(rows in prop::collection::vec(row_strategy(), 0..12)) {
        let csv = rows_to_csv(&rows);
        let parsed = rows_from_csv(&csv).unwrap();
        prop_assert_eq!(rows, parsed);
    }

    #[test]
    fn budget_dp_matches_exhaustive_vector_enumeration(
        table in table_strategy(),
    ) {
        let (rows, total_budget) = table;
        let refs: Vec<&[Option<Cover>]> = rows.iter().map(|r| r.as_slice()).collect();
        let dp = budget_dp(&refs, total_budget, 1.0).unwrap();
        let brute = brute_force_min(&rows, total_budget);
        match (dp, brute) {
            (None, None) => {}
            (Some(c), Some(b)) => prop_assert!((c.cost() - b).abs() < 1e-9,
                "dp {} vs brute {}", c.cost(), b),
            (dp, brute) => prop_assert!(false, "feasibility mismatch: dp {:?} brute {:?}",
                dp.map(|c| c.cost()), brute),
        }
    }
}

fn row_strategy() -> impl Strategy<Value = ExperimentRow> {
    (
        any::<u64>(),
        0.0f64..100.0,
        0usize..20,
        any::<bool>(),
        any::<bool>(),
        prop::option::of(0.5f64..3.0),
        prop::option::of(0.0f64..5.0),
    )
        .prop_map(
            |(seed, cost, ball_count, faithful, valid, ratio, mean)| ExperimentRow {
                seed,
                cost,
                ball_count,
                faithful,
                valid,
                ratio,
                rand_mean_intersect: mean,
                rand_mean_nonterminal: mean.map(|m| m / 2.0),
                frt_mean_intersect: mean.map(|m| m * 2.0),
                frt_mean_nonterminal: mean,
            },
        )
}

type Table = (Vec<Vec<Option<Cover>>>, usize);

fn table_strategy() -> impl Strategy<Value = Table> {
    (1usize..=4, 0usize..=6).prop_flat_map(|(tau, budget)| {
        let cell = prop::option::of((0.0f64..10.0).prop_map(|c| c));
        prop::collection::vec(
            prop::collection::vec(cell, budget + 1..=budget + 1),
            tau..=tau,
        )
        .prop_map(move |cost_rows| {
            let rows: Vec<Vec<Option<Cover>>> = cost_rows
                .iter()
                .enumerate()
                .map(|(i, row)| {
                    row.iter()
                        .enumerate()
                        .map(|(k, cell)| {
                            cell.map(|c| {
                                // Distinct dummy ball per (block, budget);
                                // alpha = 1 makes cover cost equal c.
                                Cover::new(vec![Ball::new(i * 100 + k, c)], 1.0)
                            })
                        })
                        .collect()
                })
                .collect();
            (rows, budget)
        })
    })
}

/// Minimum over all budget vectors with sum at most `total` of the summed
/// row costs; the independent oracle for the suffix DP.
fn brute_force_min(rows: &[Vec<Option<Cover>>], total: usize) -> Option<f64> {
    fn rec(rows: &[Vec<Option<Cover>>], i: usize, remaining: usize) -> Option<f64> {
        if i == rows.len() {
            return Some(0.0);
        }
        let mut best: Option<f64> = None;
        for k in 0..=remaining {
            let Some(cell) = rows[i][k].as_ref() else {
                continue;
            };
            let Some(rest) = rec(rows, i + 1, remaining - k) else {
                continue;
            };
            let cand = cell.cost() + rest;
            best = Some(best.map_or(cand, |b: f64| b.min(cand)));
        }
        best
    }
    rec(rows, 0, total)
}
