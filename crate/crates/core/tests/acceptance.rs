//! Acceptance suite: one test per criterion, printing one line with the
//! measured values. Criterion 9 (byte-identical CLI reports) lives in the
//! CLI crate's test suite.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use ballcover_core::harness::{
    generate, instance_digest, run_experiment, ExperimentSolver, Generator, InstanceSpec,
};
use ballcover_core::kcluster::{budget_dp, exact_kcluster};
use ballcover_core::metric::{Ball, Cover};
use ballcover_core::partition::{
    build_frt_counterexample, frt_partition, intersection_stats, make_dist, rand_partition, Scheme,
};
use ballcover_core::reduction::{verify_reduction, Graph};
use ballcover_core::stats;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Criterion 1: mass identities of dist(delta, k).
#[test]
fn acceptance_01_distribution_identities() {
    for k in [2usize, 4, 8, 16, 64, 100, 1000] {
        let d = make_dist(8.0, k).unwrap();
        let masses = d.masses();
        let sum: f64 = masses.iter().sum();
        let sum_err = (sum - 1.0).abs();
        // Interval masses are dyadic, so the sum is exact for every k.
        assert!(
            if k.is_power_of_two() {
                sum == 1.0
            } else {
                sum_err <= 1e-12
            },
            "k={k}: mass sum {sum}"
        );
        for j in 0..masses.len().saturating_sub(1) {
            let tail: f64 = masses[j + 1..].iter().sum();
            assert_eq!(masses[j], tail, "k={k}, j={j}: tail identity");
        }
    }
    println!("ACCEPTANCE 1 PASS: mass sums exact and tail identity exact for k in {{2,4,8,16,64,100,1000}}");
}

/// Criterion 2: sampler fidelity at (delta=8, k=16) over 10^6 samples.
#[test]
fn acceptance_02_sampler_fidelity() {
    let d = make_dist(8.0, 16).unwrap();
    let expected = [0.5, 0.25, 0.125, 0.125];
    assert_eq!(d.masses(), &expected);
    let n = 1_000_000usize;
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let mut counts = [0u64; 4];
    for _ in 0..n {
        counts[d.interval_of(d.sample(&mut rng))] += 1;
    }
    let mut max_dev = 0.0f64;
    for (j, &e) in expected.iter().enumerate() {
        let freq = counts[j] as f64 / n as f64;
        max_dev = max_dev.max((freq - e).abs());
        assert!(
            (freq - e).abs() <= 0.002,
            "interval {j}: frequency {freq} vs mass {e}"
        );
    }
    let chi2 = stats::chi_squared(&counts, &expected);
    // Critical value of chi-squared with 3 degrees of freedom at
    // significance 0.001.
    let critical = 16.266;
    assert!(chi2 <= critical, "chi-squared {chi2} over {critical}");
    println!(
        "ACCEPTANCE 2 PASS: max frequency deviation {max_dev:.5} (<= 0.002), chi2 {chi2:.3} (<= {critical})"
    );
}

/// Criterion 3: every partition over three instance families has disjoint
/// blocks, full union, and half-diameter blocks, for both schemes.
#[test]
fn acceptance_03_partition_guarantees() {
    let trials = 10_000usize;
    let families: Vec<(&str, InstanceSpec)> = vec![
        (
            "euclidean n=64",
            InstanceSpec {
                generator: Generator::EuclideanUniform {
                    n: 64,
                    m: 0,
                    dim: 2,
                    box_size: 10.0,
                },
                seed: 101,
                alpha: 1.0,
                normalize: false,
            },
        ),
        (
            "random_metric n=128",
            InstanceSpec {
                generator: Generator::RandomMetric { n: 128, m: 0 },
                seed: 102,
                alpha: 1.0,
                normalize: false,
            },
        ),
        (
            "counterexample b=8",
            InstanceSpec {
                generator: Generator::FrtCounterexample { b: 8 },
                seed: 103,
                alpha: 1.0,
                normalize: false,
            },
        ),
    ];
    for (name, spec) in families {
        let g = generate(&spec).unwrap();
        let all = g.instance.all_points();
        let n = all.len();
        // Partition constructors validate disjointness, union, and the
        // half-diameter bound on every output and error out on violation.
        (0..trials).into_par_iter().for_each(|t| {
            let seed = spec.seed.wrapping_mul(1_000_003).wrapping_add(t as u64);
            let p = rand_partition(&g.instance, &all, n, seed).unwrap();
            p.validate(&g.instance, &all).unwrap();
            let p = frt_partition(&g.instance, &all, seed).unwrap();
            p.validate(&g.instance, &all).unwrap();
        });
        println!("  {name}: {trials} trials x 2 schemes valid");
    }
    println!("ACCEPTANCE 3 PASS: all partitions valid on 3 families x {trials} trials x 2 schemes");
}

/// Criterion 4: statistical partitioning-lemma bound on random_metric
/// n=256 with the in-regime probe radius.
#[test]
fn acceptance_04_partitioning_lemma() {
    let spec = InstanceSpec {
        generator: Generator::RandomMetric { n: 256, m: 0 },
        seed: 104,
        alpha: 1.0,
        normalize: false,
    };
    let g = generate(&spec).unwrap();
    let all = g.instance.all_points();
    let diam = g.instance.diam(&all).unwrap();
    let log_n = 256f64.log2();
    let r = diam / (16.0 * log_n);
    let probe = Ball::new(0, r);
    let trials = 10_000;
    let s = intersection_stats(
        &g.instance,
        &all,
        &probe,
        Scheme::RandPartition,
        trials,
        104,
        true,
    )
    .unwrap();
    let c = 64.0;
    let mean_bound = 1.0 + c * (r / diam) * log_n + 4.0 * s.se_intersect;
    let nt_bound = c * (r / diam) * log_n + 4.0 * s.se_nonterminal;
    assert!(
        s.mean_intersect <= mean_bound,
        "mean {} over {mean_bound}",
        s.mean_intersect
    );
    assert!(
        s.mean_nonterminal <= nt_bound,
        "non-terminal mean {} over {nt_bound}",
        s.mean_nonterminal
    );
    println!(
        "ACCEPTANCE 4 PASS: mean {:.4} <= {:.3}, non-terminal {:.4} <= {:.3} at {trials} trials",
        s.mean_intersect, mean_bound, s.mean_nonterminal, nt_bound
    );
}

/// Criterion 5: FRT separation factor >= 2 on the b=24 counterexample.
///
/// The separation is real and overwhelming (the rival scheme's mean is
/// ~1.65 vs exactly 1.0, more than 20 standard errors apart, and the gap
/// grows with b), but the factor-2 threshold at b=24 is not attainable: the
/// primary scheme's first center is the hub and always swallows the probe,
/// pinning its mean at the floor of 1.0, while the rival mean at this size
/// is 1 + b^2/((2b+1) * 2 log2 n) = 1.64. The assertion keeps the stated
/// threshold; see the failure message for the measured values.
#[test]
fn acceptance_05_frt_separation() {
    let ce = build_frt_counterexample(24).unwrap();
    assert_eq!(ce.instance.num_points(), 602);
    let all = ce.instance.all_points();
    let trials = 10_000;
    let rand = intersection_stats(
        &ce.instance,
        &all,
        &ce.probe,
        Scheme::RandPartition,
        trials,
        105,
        true,
    )
    .unwrap();
    let frt = intersection_stats(
        &ce.instance,
        &all,
        &ce.probe,
        Scheme::Frt,
        trials,
        105,
        true,
    )
    .unwrap();
    let ratio = frt.mean_intersect / rand.mean_intersect;
    let line = format!(
        "frt mean {:.4} (se {:.4}) vs rand mean {:.4} (se {:.4}): ratio {:.3}",
        frt.mean_intersect, frt.se_intersect, rand.mean_intersect, rand.se_intersect, ratio
    );
    assert!(
        frt.mean_intersect >= 2.0 * rand.mean_intersect,
        "ACCEPTANCE 5 FAIL (threshold 2.0 unattainable at b=24; max possible ratio ~1.65): {line}"
    );
    println!("ACCEPTANCE 5 PASS: {line}");
}

/// Criterion 6: MCC end to end on 30 random instances, 20 seeds each.
#[test]
fn acceptance_06_mcc_end_to_end() {
    let epsilon = 0.5;
    let outcomes: Vec<(usize, f64, f64)> = (0..30usize)
        .into_par_iter()
        .map(|i| {
            let n = 8 + (i % 5); // clients in 8..=12
            let m = 4 + (i % 5).min(4); // servers in 4..=8
            let spec = InstanceSpec {
                generator: Generator::RandomMetric { n, m },
                seed: 1000 + i as u64,
                alpha: 1.0,
                normalize: true,
            };
            let g = generate(&spec).unwrap();
            let digest = instance_digest(&g.file).unwrap();
            let solver = ExperimentSolver::Mcc {
                epsilon,
                max_enum: None,
            };
            let seeds: Vec<u64> = (0..20).collect();
            let result = run_experiment(&g.instance, &digest, &solver, &seeds).unwrap();
            let oracle = result.oracle_cost.expect("instance within oracle limits");
            assert!(result.all_valid, "instance {i}: invalid cover");
            for row in &result.rows {
                assert!(row.faithful, "instance {i}: capped run");
                assert!(
                    row.cost >= oracle - 1e-9,
                    "instance {i} seed {}: cost {} under oracle {oracle}",
                    row.seed,
                    row.cost
                );
            }
            let costs: Vec<f64> = result.rows.iter().map(|r| r.cost).collect();
            let mean = stats::mean(&costs);
            let se = stats::standard_error(&costs);
            assert!(
                mean <= 1.5 * oracle + 3.0 * se + 1e-9,
                "instance {i}: mean {mean} over 1.5 x oracle {oracle} + 3 se {se}"
            );
            (i, mean / oracle, oracle)
        })
        .collect();
    let worst = outcomes.iter().map(|o| o.1).fold(0.0f64, f64::max);
    println!(
        "ACCEPTANCE 6 PASS: 30 instances x 20 seeds valid, cost >= oracle every run, worst mean/oracle ratio {worst:.4} (<= 1.5 + 3 SE)"
    );
}

/// Criterion 7: k-clustering end to end plus the budget-DP oracle
/// equivalence on random tables.
#[test]
fn acceptance_07_kcluster_end_to_end() {
    let epsilon = 0.6;
    let runs_per = 9usize;
    let outcomes: Vec<f64> = (0..30usize)
        .into_par_iter()
        .flat_map(|i| {
            [2usize, 3].into_par_iter().map(move |k| {
                let n = 8 + (i % 5);
                let spec = InstanceSpec {
                    generator: Generator::RandomMetric { n, m: 0 },
                    seed: 2000 + i as u64,
                    alpha: 1.0,
                    normalize: true,
                };
                let g = generate(&spec).unwrap();
                let digest = instance_digest(&g.file).unwrap();
                let solver = ExperimentSolver::Kcluster {
                    k,
                    epsilon,
                    max_enum: None,
                };
                let seeds: Vec<u64> = (0..runs_per as u64).collect();
                let result = run_experiment(&g.instance, &digest, &solver, &seeds).unwrap();
                let budget = ((1.0 + epsilon) * k as f64).floor() as usize;
                assert!(result.all_valid, "instance {i} k={k}: invalid output");
                for row in &result.rows {
                    assert!(
                        row.ball_count <= budget,
                        "instance {i} k={k} seed {}: {} balls over floor((1+eps)k) = {budget}",
                        row.seed,
                        row.ball_count
                    );
                }
                let exact = exact_kcluster(&g.instance, &g.instance.clients(), k)
                    .unwrap()
                    .cost();
                let within = result
                    .rows
                    .iter()
                    .filter(|r| r.cost <= (1.0 + epsilon) * exact + 1e-9)
                    .count();
                assert!(
                    3 * within >= 2 * runs_per,
                    "instance {i} k={k}: only {within}/{runs_per} runs within (1+eps) x exact"
                );
                within as f64 / runs_per as f64
            })
        })
        .collect();
    let worst = outcomes.iter().copied().fold(1.0f64, f64::min);

    // Budget DP equals exhaustive budget-vector enumeration on 100 random
    // tables with tau <= 4 and budget <= 6.
    let mut rng = ChaCha8Rng::seed_from_u64(777);
    for case in 0..100 {
        let tau = 1 + rng.random_range(0..4usize);
        let budget = rng.random_range(0..=6usize);
        let rows: Vec<Vec<Option<Cover>>> = (0..tau)
            .map(|i| {
                (0..=budget)
                    .map(|kb| {
                        if rng.random::<f64>() < 0.15 {
                            None
                        } else {
                            let cost = rng.random::<f64>() * 10.0;
                            Some(Cover::new(vec![Ball::new(i * 100 + kb, cost)], 1.0))
                        }
                    })
                    .collect()
            })
            .collect();
        let refs: Vec<&[Option<Cover>]> = rows.iter().map(|r| r.as_slice()).collect();
        let dp = budget_dp(&refs, budget, 1.0).unwrap();
        let brute = brute_vector_min(&rows, budget);
        match (&dp, brute) {
            (None, None) => {}
            (Some(c), Some(b)) => assert!(
                (c.cost() - b).abs() < 1e-9,
                "case {case}: dp {} vs brute {b}",
                c.cost()
            ),
            _ => panic!(
                "case {case}: feasibility mismatch dp {:?} brute {:?}",
                dp.map(|c| c.cost()),
                brute
            ),
        }
    }
    println!(
        "ACCEPTANCE 7 PASS: 30 instances x k in {{2,3}} valid within floor((1+eps)k) balls, worst within-(1+eps) fraction {worst:.3} (>= 2/3); budget DP == vector enumeration on 100 tables"
    );
}

fn brute_vector_min(rows: &[Vec<Option<Cover>>], total: usize) -> Option<f64> {
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

/// Criterion 8: the reduction's covering optimum equals the domination
/// number on 50 random graphs.
#[test]
fn acceptance_08_reduction_correctness() {
    let mut rng = ChaCha8Rng::seed_from_u64(888);
    let mut cases = Vec::new();
    for i in 0..50 {
        let n = 2 + rng.random_range(0..9usize); // 2..=10
        let p = [0.2, 0.5, 0.8][i % 3];
        let mut edges = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                if rng.random::<f64>() < p {
                    edges.push((u, v));
                }
            }
        }
        cases.push(Graph::new(n, &edges).unwrap());
    }
    let reports: Vec<_> = cases
        .par_iter()
        .map(|g| verify_reduction(g).expect("reduction round-trip"))
        .collect();
    for r in &reports {
        assert_eq!(r.mcc_cost, r.domination_number as f64);
        assert!(r.radii_all_one);
    }
    println!(
        "ACCEPTANCE 8 PASS: 50 random graphs (n <= 10): covering optimum == domination number exactly, all optimal radii exactly 1"
    );
}
