//! Instance generators, normalization, and the seeded experiment runner.
//!
//! All randomness flows from a single top-level seed through named
//! substreams, so generated instances and experiment results are
//! bit-reproducible. Wall-clock timings are kept in memory only; serialized
//! reports must be byte-identical across reruns.

use crate::error::{Error, Result};
use crate::kcluster::{clustering, exact_kcluster, KclusterConfig, EXACT_KCLUSTER_LIMIT};
use crate::mcc::{exact_mcc, point_cover, MccConfig, TraceSummary, EXACT_MCC_LIMIT};
use crate::metric::{is_cover, Ball, Cover, MetricInstance, Role};
use crate::partition::{build_frt_counterexample, intersection_stats, IntersectionStats, Scheme};
use crate::reduction::reduce_dsp_to_mcc;
use crate::schema::{build_instance, GraphFile, InstanceFile, MetricDef, PointDef};
use crate::seeding::{fnv1a64, mix64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

const STREAM_INSTANCE: u64 = 0x696e7374;

/// Instance generators available to the harness.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Generator {
    /// Uniform points in a box: `n` clients then `m` servers.
    EuclideanUniform {
        n: usize,
        m: usize,
        dim: usize,
        box_size: f64,
    },
    /// Random symmetric matrix forced into a metric by shortest-path
    /// closure: `n` clients then `m` servers.
    RandomMetric { n: usize, m: usize },
    /// Unweighted graph loaded from a file; metric is hop distance, all
    /// roles are `both`.
    Graph { path: PathBuf },
    /// The adversarial spider instance with its designated probe.
    FrtCounterexample { b: usize },
    /// The dominating-set covering gadget built from a graph file; the
    /// exponent is fixed by the construction.
    DspReduction { path: PathBuf },
}

/// A reproducible instance recipe.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub generator: Generator,
    pub seed: u64,
    pub alpha: f64,
    /// Rescale so the minimum positive client interpoint distance is 1.
    pub normalize: bool,
}

/// A generated instance together with its serialized form.
#[derive(Debug, Clone)]
pub struct GeneratedInstance {
    pub instance: MetricInstance,
    pub file: InstanceFile,
    /// Designated probe ball, when the generator defines one.
    pub probe: Option<Ball>,
}

/// Runs a generator; deterministic in the spec's seed.
pub fn generate(spec: &InstanceSpec) -> Result<GeneratedInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(mix64(spec.seed, STREAM_INSTANCE));
    let (mut file, probe) = match &spec.generator {
        Generator::EuclideanUniform {
            n,
            m,
            dim,
            box_size,
        } => {
            if *dim == 0 || n + m == 0 {
                return Err(Error::UsageError("empty euclidean spec".into()));
            }
            let coords: Vec<Vec<f64>> = (0..n + m)
                .map(|_| (0..*dim).map(|_| rng.random::<f64>() * box_size).collect())
                .collect();
            let file = InstanceFile {
                alpha: spec.alpha,
                points: role_split(*n, *m),
                metric: MetricDef::Euclidean { coords },
            };
            (file, None)
        }
        #[allow(clippy::needless_range_loop)]
        Generator::RandomMetric { n, m } => {
            let total = n + m;
            if total == 0 {
                return Err(Error::UsageError("empty random-metric spec".into()));
            }
            let mut d = vec![vec![0.0f64; total]; total];
            for i in 0..total {
                for j in (i + 1)..total {
                    let w = 1.0 + 3.0 * rng.random::<f64>();
                    d[i][j] = w;
                    d[j][i] = w;
                }
            }
            shortest_path_closure(&mut d);
            let file = InstanceFile {
                alpha: spec.alpha,
                points: role_split(*n, *m),
                metric: MetricDef::Matrix { d },
            };
            (file, None)
        }
        Generator::Graph { path } => {
            let g = GraphFile::read(path)?;
            let edges = g.edges.iter().map(|&(u, v)| (u, v, 1.0)).collect();
            let file = InstanceFile {
                alpha: spec.alpha,
                points: (0..g.n)
                    .map(|id| PointDef {
                        id,
                        role: Role::Both,
                    })
                    .collect(),
                metric: MetricDef::Graph { edges },
            };
            (file, None)
        }
        Generator::FrtCounterexample { b } => {
            let ce = build_frt_counterexample(*b)?;
            let n = ce.instance.num_points();
            let d = (0..n)
                .map(|i| (0..n).map(|j| ce.instance.d(i, j)).collect())
                .collect();
            let file = InstanceFile {
                alpha: spec.alpha,
                points: (0..n)
                    .map(|id| PointDef {
                        id,
                        role: Role::Both,
                    })
                    .collect(),
                metric: MetricDef::Matrix { d },
            };
            (file, Some(ce.probe))
        }
        Generator::DspReduction { path } => {
            let g = GraphFile::read(path)?;
            let graph = crate::reduction::Graph::new(g.n, &g.edges)?;
            let inst = reduce_dsp_to_mcc(&graph)?;
            (crate::schema::to_matrix_file(&inst), None)
        }
    };
    if spec.normalize {
        file = normalize_file(&file)?.0;
    }
    let instance = build_instance(&file)?;
    Ok(GeneratedInstance {
        instance,
        file,
        probe,
    })
}

fn role_split(n: usize, m: usize) -> Vec<PointDef> {
    (0..n + m)
        .map(|id| PointDef {
            id,
            role: if id < n { Role::Client } else { Role::Server },
        })
        .collect()
}

/// Floyd-Warshall min-plus closure in place.
#[allow(clippy::needless_range_loop)]
fn shortest_path_closure(d: &mut [Vec<f64>]) {
    let n = d.len();
    for k in 0..n {
        for i in 0..n {
            let dik = d[i][k];
            for j in 0..n {
                let via = dik + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
}

/// Rescales the serialized instance so the minimum positive client
/// interpoint distance is 1. Returns the file and the scale applied.
/// Instances with no positive client pair are returned unchanged.
pub fn normalize_file(file: &InstanceFile) -> Result<(InstanceFile, f64)> {
    let inst = build_instance(file)?;
    let clients = inst.clients();
    let mut min_pos: Option<f64> = None;
    for (a, &p) in clients.iter().enumerate() {
        for &q in &clients[a + 1..] {
            let d = inst.d(p, q);
            if d > 0.0 {
                min_pos = Some(min_pos.map_or(d, |m: f64| m.min(d)));
            }
        }
    }
    let Some(min_pos) = min_pos else {
        return Ok((file.clone(), 1.0));
    };
    let scale = 1.0 / min_pos;
    let mut out = file.clone();
    out.metric = match &file.metric {
        MetricDef::Matrix { d } => MetricDef::Matrix {
            d: d.iter()
                .map(|row| row.iter().map(|x| x * scale).collect())
                .collect(),
        },
        MetricDef::Euclidean { coords } => MetricDef::Euclidean {
            coords: coords
                .iter()
                .map(|row| row.iter().map(|x| x * scale).collect())
                .collect(),
        },
        MetricDef::Graph { edges } => MetricDef::Graph {
            edges: edges.iter().map(|&(u, v, w)| (u, v, w * scale)).collect(),
        },
    };
    Ok((out, scale))
}

/// Stable content digest of an instance (hex of FNV-1a over its canonical
/// JSON bytes).
pub fn instance_digest(file: &InstanceFile) -> Result<String> {
    Ok(format!("{:016x}", fnv1a64(file.to_json()?.as_bytes())))
}

/// A single solver run, as persisted in reports.
///
/// Wall time is measured but never serialized: reports must be
/// byte-identical across reruns with the same seed.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveReport {
    pub solver: String,
    pub seed: u64,
    pub cover: Vec<Ball>,
    pub cost: f64,
    pub ball_count: usize,
    pub faithful: bool,
    pub valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget_bound: Option<usize>,
    pub trace_summary: TraceSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_cost: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio: Option<f64>,
    /// Set when an oracle comparison was requested but the instance exceeds
    /// the exact-solver limits.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_skipped: Option<bool>,
    #[serde(skip)]
    pub wall_ms: u128,
}

/// Solver selection for an experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "solver", rename_all = "snake_case")]
pub enum ExperimentSolver {
    Mcc {
        epsilon: f64,
        max_enum: Option<usize>,
    },
    Kcluster {
        k: usize,
        epsilon: f64,
        max_enum: Option<usize>,
    },
    PartitionStats {
        probe_center: usize,
        probe_radius: f64,
        trials: usize,
    },
}

/// One row of an experiment: a solver run or a partition-stats comparison
/// under one seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRow {
    pub seed: u64,
    pub cost: f64,
    pub ball_count: usize,
    pub faithful: bool,
    pub valid: bool,
    pub ratio: Option<f64>,
    pub rand_mean_intersect: Option<f64>,
    pub rand_mean_nonterminal: Option<f64>,
    pub frt_mean_intersect: Option<f64>,
    pub frt_mean_nonterminal: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub mean_cost: f64,
    pub min_cost: f64,
    pub max_cost: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rand_mean: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frt_mean: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frt_over_rand: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub instance_digest: String,
    pub config: ExperimentSolver,
    pub rows: Vec<ExperimentRow>,
    pub aggregate: Aggregate,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_cost: Option<f64>,
    /// Set when the instance exceeded the exact-oracle limits and the
    /// comparison was skipped.
    pub oracle_skipped: bool,
    pub all_valid: bool,
}

/// Runs a solver once and wraps the outcome in a report.
pub fn solve_once(
    inst: &MetricInstance,
    solver: &ExperimentSolver,
    seed: u64,
) -> Result<SolveReport> {
    let start = std::time::Instant::now();
    let clients = inst.clients();
    match solver {
        ExperimentSolver::Mcc { epsilon, max_enum } => {
            let mut cfg = MccConfig::new(*epsilon, seed);
            cfg.max_enum = *max_enum;
            let sol = point_cover(inst, &cfg)?;
            let valid = is_cover(inst, &sol.cover, &clients);
            Ok(SolveReport {
                solver: "mcc".into(),
                seed,
                cover: sol.cover.balls().to_vec(),
                cost: sol.cover.cost(),
                ball_count: sol.cover.ball_count(),
                faithful: sol.faithful,
                valid,
                budget_bound: None,
                trace_summary: sol.trace.summary(),
                exact_cost: None,
                ratio: None,
                oracle_skipped: None,
                wall_ms: start.elapsed().as_millis(),
            })
        }
        ExperimentSolver::Kcluster {
            k,
            epsilon,
            max_enum,
        } => {
            let mut cfg = KclusterConfig::new(*epsilon, *k, seed);
            cfg.max_enum = *max_enum;
            let sol = clustering(inst, &cfg)?;
            let valid =
                is_cover(inst, &sol.cover, &clients) && sol.cover.ball_count() <= sol.budget_bound;
            Ok(SolveReport {
                solver: "kcluster".into(),
                seed,
                cover: sol.cover.balls().to_vec(),
                cost: sol.cover.cost(),
                ball_count: sol.cover.ball_count(),
                faithful: sol.faithful,
                valid,
                budget_bound: Some(sol.budget_bound),
                trace_summary: sol.trace.summary(),
                exact_cost: None,
                ratio: None,
                oracle_skipped: None,
                wall_ms: start.elapsed().as_millis(),
            })
        }
        ExperimentSolver::PartitionStats { .. } => Err(Error::UsageError(
            "partition-stats has no single-cover report; use run_experiment".into(),
        )),
    }
}

/// Exact optimum for the solver's problem, when the instance is within
/// oracle limits.
pub fn oracle_cost(inst: &MetricInstance, solver: &ExperimentSolver) -> Result<Option<f64>> {
    let clients = inst.clients();
    match solver {
        ExperimentSolver::Mcc { .. } => {
            if clients.len() > EXACT_MCC_LIMIT {
                return Ok(None);
            }
            Ok(Some(exact_mcc(inst, &clients, None)?.cost()))
        }
        ExperimentSolver::Kcluster { k, .. } => {
            if clients.len() > EXACT_KCLUSTER_LIMIT {
                return Ok(None);
            }
            match exact_kcluster(inst, &clients, *k) {
                Ok(c) => Ok(Some(c.cost())),
                Err(Error::Infeasible) => Ok(None),
                Err(e) => Err(e),
            }
        }
        ExperimentSolver::PartitionStats { .. } => Ok(None),
    }
}

/// Runs one solver (or the partition-stats comparison) over a list of
/// seeds. Seeds fan out across workers; rows are ordered by input position.
pub fn run_experiment(
    inst: &MetricInstance,
    digest: &str,
    solver: &ExperimentSolver,
    seeds: &[u64],
) -> Result<ExperimentResult> {
    if seeds.is_empty() {
        return Err(Error::UsageError(
            "experiment requires at least one seed".into(),
        ));
    }
    let oracle = oracle_cost(inst, solver)?;
    let oracle_skipped = matches!(
        solver,
        ExperimentSolver::Mcc { .. } | ExperimentSolver::Kcluster { .. }
    ) && oracle.is_none();

    let rows: Vec<ExperimentRow> = match solver {
        ExperimentSolver::PartitionStats {
            probe_center,
            probe_radius,
            trials,
        } => {
            let probe = Ball::new(*probe_center, *probe_radius);
            let all = inst.all_points();
            seeds
                .par_iter()
                .map(|&seed| -> Result<ExperimentRow> {
                    let rand = intersection_stats(
                        inst,
                        &all,
                        &probe,
                        Scheme::RandPartition,
                        *trials,
                        seed,
                        false,
                    )?;
                    let frt =
                        intersection_stats(inst, &all, &probe, Scheme::Frt, *trials, seed, false)?;
                    Ok(ExperimentRow {
                        seed,
                        cost: 0.0,
                        ball_count: 0,
                        faithful: true,
                        valid: true,
                        ratio: None,
                        rand_mean_intersect: Some(rand.mean_intersect),
                        rand_mean_nonterminal: Some(rand.mean_nonterminal),
                        frt_mean_intersect: Some(frt.mean_intersect),
                        frt_mean_nonterminal: Some(frt.mean_nonterminal),
                    })
                })
                .collect::<Result<Vec<_>>>()?
        }
        _ => seeds
            .par_iter()
            .map(|&seed| -> Result<ExperimentRow> {
                let report = solve_once(inst, solver, seed)?;
                let ratio = oracle.and_then(|o| if o > 0.0 { Some(report.cost / o) } else { None });
                Ok(ExperimentRow {
                    seed,
                    cost: report.cost,
                    ball_count: report.ball_count,
                    faithful: report.faithful,
                    valid: report.valid,
                    ratio,
                    rand_mean_intersect: None,
                    rand_mean_nonterminal: None,
                    frt_mean_intersect: None,
                    frt_mean_nonterminal: None,
                })
            })
            .collect::<Result<Vec<_>>>()?,
    };

    let costs: Vec<f64> = rows.iter().map(|r| r.cost).collect();
    let ratios: Vec<f64> = rows.iter().filter_map(|r| r.ratio).collect();
    let rand_means: Vec<f64> = rows.iter().filter_map(|r| r.rand_mean_intersect).collect();
    let frt_means: Vec<f64> = rows.iter().filter_map(|r| r.frt_mean_intersect).collect();
    let rand_mean = (!rand_means.is_empty()).then(|| crate::stats::mean(&rand_means));
    let frt_mean = (!frt_means.is_empty()).then(|| crate::stats::mean(&frt_means));
    let aggregate = Aggregate {
        mean_cost: crate::stats::mean(&costs),
        min_cost: costs.iter().copied().fold(f64::INFINITY, f64::min),
        max_cost: costs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        mean_ratio: (!ratios.is_empty()).then(|| crate::stats::mean(&ratios)),
        rand_mean,
        frt_mean,
        frt_over_rand: match (rand_mean, frt_mean) {
            (Some(r), Some(f)) if r > 0.0 => Some(f / r),
            _ => None,
        },
    };
    let all_valid = rows.iter().all(|r| r.valid);
    Ok(ExperimentResult {
        instance_digest: digest.to_string(),
        config: solver.clone(),
        rows,
        aggregate,
        oracle_cost: oracle,
        oracle_skipped,
        all_valid,
    })
}

fn opt_cell<T: std::fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

fn parse_opt<T: std::str::FromStr>(s: &str) -> Result<Option<T>> {
    if s.is_empty() {
        Ok(None)
    } else {
        s.parse::<T>()
            .map(Some)
            .map_err(|_| Error::UsageError(format!("bad csv cell: {s}")))
    }
}

const CSV_HEADER: &str = "seed,cost,ball_count,faithful,valid,ratio,rand_mean_intersect,rand_mean_nonterminal,frt_mean_intersect,frt_mean_nonterminal";

/// Serializes experiment rows as CSV. Floats use the shortest
/// round-trippable form, so parsing the output recovers the rows exactly.
pub fn rows_to_csv(rows: &[ExperimentRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            r.seed,
            r.cost,
            r.ball_count,
            r.faithful,
            r.valid,
            opt_cell(&r.ratio),
            opt_cell(&r.rand_mean_intersect),
            opt_cell(&r.rand_mean_nonterminal),
            opt_cell(&r.frt_mean_intersect),
            opt_cell(&r.frt_mean_nonterminal),
        ));
    }
    out
}

/// Parses CSV produced by [`rows_to_csv`].
pub fn rows_from_csv(s: &str) -> Result<Vec<ExperimentRow>> {
    let mut lines = s.lines();
    match lines.next() {
        Some(h) if h == CSV_HEADER => {}
        _ => return Err(Error::UsageError("bad csv header".into())),
    }
    let mut rows = Vec::new();
    for line in lines {
        if line.is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != 10 {
            return Err(Error::UsageError(format!("bad csv row: {line}")));
        }
        rows.push(ExperimentRow {
            seed: cells[0]
                .parse()
                .map_err(|_| Error::UsageError("bad seed".into()))?,
            cost: cells[1]
                .parse()
                .map_err(|_| Error::UsageError("bad cost".into()))?,
            ball_count: cells[2]
                .parse()
                .map_err(|_| Error::UsageError("bad ball_count".into()))?,
            faithful: cells[3]
                .parse()
                .map_err(|_| Error::UsageError("bad faithful".into()))?,
            valid: cells[4]
                .parse()
                .map_err(|_| Error::UsageError("bad valid".into()))?,
            ratio: parse_opt(cells[5])?,
            rand_mean_intersect: parse_opt(cells[6])?,
            rand_mean_nonterminal: parse_opt(cells[7])?,
            frt_mean_intersect: parse_opt(cells[8])?,
            frt_mean_nonterminal: parse_opt(cells[9])?,
        });
    }
    Ok(rows)
}

/// Per-trial CSV for the partition-stats subcommand.
pub fn intersection_stats_csv(stats: &IntersectionStats) -> String {
    let mut out = String::from("trial,blocks_intersected,blocks_nonterminal\n");
    for (t, &(total, nonterminal)) in stats.counts.iter().enumerate() {
        out.push_str(&format!("{t},{total},{nonterminal}\n"));
    }
    out
}

/// Validates a cover against the instance's clients; used by callers that
/// persist reports.
pub fn cover_is_valid(inst: &MetricInstance, cover: &Cover) -> bool {
    is_cover(inst, cover, &inst.clients())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(generator: Generator, seed: u64) -> InstanceSpec {
        InstanceSpec {
            generator,
            seed,
            alpha: 1.0,
            normalize: false,
        }
    }

    #[test]
    fn euclidean_generation_is_deterministic() {
        let s = spec(
            Generator::EuclideanUniform {
                n: 4,
                m: 2,
                dim: 2,
                box_size: 1.0,
            },
            7,
        );
        let a = generate(&s).unwrap();
        let b = generate(&s).unwrap();
        assert_eq!(a.file, b.file);
        assert_eq!(a.instance.num_points(), 6);
        assert_eq!(a.instance.clients().len(), 4);
    }

    #[test]
    fn random_metric_is_metric_for_many_seeds() {
        for seed in 0..25 {
            let s = spec(Generator::RandomMetric { n: 6, m: 3 }, seed);
            // Construction validates the metric axioms.
            generate(&s).unwrap();
        }
    }

    #[test]
    fn counterexample_point_count() {
        let s = spec(Generator::FrtCounterexample { b: 2 }, 0);
        let g = generate(&s).unwrap();
        assert_eq!(g.instance.num_points(), 8);
        assert!(g.probe.is_some());
    }

    #[test]
    fn normalization_sets_min_client_distance_to_one() {
        let s = InstanceSpec {
            generator: Generator::EuclideanUniform {
                n: 5,
                m: 2,
                dim: 2,
                box_size: 1.0,
            },
            seed: 3,
            alpha: 1.0,
            normalize: true,
        };
        let g = generate(&s).unwrap();
        let min = g.instance.min_client_distance().unwrap();
        assert!((min - 1.0).abs() < 1e-9);
    }

    #[test]
    fn scaling_by_power_of_two_scales_oracle_costs_exactly() {
        let s = spec(Generator::RandomMetric { n: 5, m: 3 }, 11);
        let g = generate(&s).unwrap();
        for alpha in [1.0, 2.0] {
            let base = rebuild_with_alpha(&g.instance, alpha);
            let scaled = base.scaled(4.0).unwrap();
            let clients = base.clients();
            let a = exact_mcc(&base, &clients, None).unwrap();
            let b = exact_mcc(&scaled, &clients, None).unwrap();
            // Same ball identities, radii scaled, cost scaled by 4^alpha.
            let centers_a: Vec<usize> = a.balls().iter().map(|x| x.center).collect();
            let centers_b: Vec<usize> = b.balls().iter().map(|x| x.center).collect();
            assert_eq!(centers_a, centers_b);
            for (x, y) in a.balls().iter().zip(b.balls()) {
                assert_eq!(y.radius, 4.0 * x.radius);
            }
            assert_eq!(b.cost(), 4.0f64.powf(alpha) * a.cost());
        }
    }

    fn rebuild_with_alpha(inst: &MetricInstance, alpha: f64) -> MetricInstance {
        let n = inst.num_points();
        let d = (0..n)
            .map(|i| (0..n).map(|j| inst.d(i, j)).collect())
            .collect();
        MetricInstance::from_matrix(inst.roles().to_vec(), d, alpha).unwrap()
    }

    #[test]
    fn experiment_mcc_rows_and_ratio() {
        let s = InstanceSpec {
            generator: Generator::RandomMetric { n: 8, m: 4 },
            seed: 21,
            alpha: 1.0,
            normalize: true,
        };
        let g = generate(&s).unwrap();
        let digest = instance_digest(&g.file).unwrap();
        let solver = ExperimentSolver::Mcc {
            epsilon: 0.5,
            max_enum: None,
        };
        let seeds: Vec<u64> = (0..5).collect();
        let result = run_experiment(&g.instance, &digest, &solver, &seeds).unwrap();
        assert_eq!(result.rows.len(), 5);
        assert!(result.all_valid);
        assert!(!result.oracle_skipped);
        let oracle = result.oracle_cost.unwrap();
        for row in &result.rows {
            assert!(row.valid);
            assert!(row.cost >= oracle - 1e-9);
            assert!(row.ratio.unwrap() >= 1.0 - 1e-9);
        }
    }

    #[test]
    fn experiment_empty_seeds_is_usage_error() {
        let s = spec(Generator::RandomMetric { n: 4, m: 2 }, 1);
        let g = generate(&s).unwrap();
        let solver = ExperimentSolver::Mcc {
            epsilon: 0.5,
            max_enum: None,
        };
        assert!(matches!(
            run_experiment(&g.instance, "d", &solver, &[]),
            Err(Error::UsageError(_))
        ));
    }

    #[test]
    fn csv_round_trip() {
        let rows = vec![
            ExperimentRow {
                seed: 1,
                cost: 2.5000000000000004,
                ball_count: 3,
                faithful: true,
                valid: true,
                ratio: Some(1.0833333333333333),
                rand_mean_intersect: None,
                rand_mean_nonterminal: None,
                frt_mean_intersect: None,
                frt_mean_nonterminal: None,
            },
            ExperimentRow {
                seed: 2,
                cost: 0.0,
                ball_count: 0,
                faithful: true,
                valid: true,
                ratio: None,
                rand_mean_intersect: Some(1.0),
                rand_mean_nonterminal: Some(0.0),
                frt_mean_intersect: Some(1.6515),
                frt_mean_nonterminal: Some(0.6515),
            },
        ];
        let csv = rows_to_csv(&rows);
        let parsed = rows_from_csv(&csv).unwrap();
        assert_eq!(rows, parsed);
    }

    #[test]
    fn digest_is_stable() {
        let s = spec(Generator::RandomMetric { n: 4, m: 2 }, 5);
        let g = generate(&s).unwrap();
        let d1 = instance_digest(&g.file).unwrap();
        let d2 = instance_digest(&g.file).unwrap();
        assert_eq!(d1, d2);
        assert_eq!(d1.len(), 16);
    }
}
