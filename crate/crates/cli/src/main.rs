//! Command-line driver: instance generation, solvers, exact oracles, the
//! dominating-set reduction, partition statistics, and seeded experiments.
//!
//! Exit codes: 0 on success, 1 on an invariant violation (invalid result,
//! failed verification, invalid input data), 2 on usage errors.

use ballcover_core::error::Error as CoreError;
use ballcover_core::harness::{
    self, generate, instance_digest, run_experiment, solve_once, ExperimentSolver, Generator,
    InstanceSpec,
};
use ballcover_core::kcluster::{exact_kcluster, EXACT_KCLUSTER_LIMIT};
use ballcover_core::mcc::{exact_mcc, EXACT_MCC_LIMIT};
use ballcover_core::metric::{Ball, MetricInstance};
use ballcover_core::partition::{intersection_stats, Scheme};
use ballcover_core::reduction::{reduce_dsp_to_mcc, verify_reduction, Graph};
use ballcover_core::schema::{build_instance, to_matrix_file, GraphFile, InstanceFile};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "ballcover",
    version,
    about = "Metric ball-cover and clustering toolkit"
)]
struct Cli {
    /// RNG seed used by randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output path; stdout when omitted (experiment uses it as a prefix).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Stdout summary format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance file.
    Gen(GenArgs),
    /// Per-trial probe-ball intersection counts under repeated partitions.
    PartitionStats(PartitionStatsArgs),
    /// Approximate minimum-cost covering of the clients.
    SolveMcc(SolveMccArgs),
    /// Bicriteria clustering of the clients with a ball budget.
    SolveKcluster(SolveKclusterArgs),
    /// Exact brute-force optimum (covering, or clustering with --k).
    Exact(ExactArgs),
    /// Build the covering instance of the dominating-set reduction.
    ReduceDsp(GraphArg),
    /// Check that the reduction's covering optimum equals the domination
    /// number.
    VerifyReduction(GraphArg),
    /// Run a solver over a list of seeds and aggregate the results.
    Experiment(ExperimentArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum GeneratorKind {
    EuclideanUniform,
    RandomMetric,
    Graph,
    FrtCounterexample,
    DspReduction,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    generator: GeneratorKind,
    /// Client count (euclidean-uniform, random-metric).
    #[arg(long)]
    n: Option<usize>,
    /// Server count (euclidean-uniform, random-metric).
    #[arg(long)]
    m: Option<usize>,
    /// Dimension (euclidean-uniform).
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Box side length (euclidean-uniform).
    #[arg(long, default_value_t = 1.0)]
    box_size: f64,
    /// Spoke count (frt-counterexample).
    #[arg(long)]
    b: Option<usize>,
    /// Graph file (graph, dsp-reduction).
    #[arg(long)]
    path: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// Rescale so the minimum client interpoint distance is 1.
    #[arg(long)]
    normalize: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Rand,
    Frt,
}

#[derive(Args)]
struct PartitionStatsArgs {
    #[arg(long)]
    instance: PathBuf,
    /// Point subset to partition; only "all" is supported.
    #[arg(long, default_value = "all")]
    subset: String,
    #[arg(long)]
    probe_center: usize,
    #[arg(long)]
    probe_radius: f64,
    #[arg(long, value_enum)]
    scheme: SchemeArg,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    /// Error out when the probe radius exceeds the lemma regime.
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct SolveMccArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    epsilon: f64,
    #[arg(long)]
    max_enum: Option<usize>,
    /// Also compute the exact optimum and report the ratio.
    #[arg(long)]
    exact: bool,
}

#[derive(Args)]
struct SolveKclusterArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    epsilon: f64,
    #[arg(long)]
    max_enum: Option<usize>,
    #[arg(long)]
    exact: bool,
}

#[derive(Args)]
struct ExactArgs {
    #[arg(long)]
    instance: PathBuf,
    /// Solve k-clustering instead of covering.
    #[arg(long)]
    k: Option<usize>,
    /// Restrict covering to at most this many balls.
    #[arg(long)]
    max_balls: Option<usize>,
}

#[derive(Args)]
struct GraphArg {
    #[arg(long)]
    graph: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolverArg {
    Mcc,
    Kcluster,
    PartitionStats,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, value_enum)]
    solver: SolverArg,
    /// Comma-separated seed list.
    #[arg(long, value_delimiter = ',')]
    seeds: Vec<u64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    max_enum: Option<usize>,
    #[arg(long)]
    probe_center: Option<usize>,
    #[arg(long)]
    probe_radius: Option<f64>,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &CoreError) -> u8 {
    match e {
        CoreError::UsageError(_) | CoreError::Io(_) | CoreError::Json(_) => 2,
        _ => 1,
    }
}

fn load_instance(path: &Path) -> Result<(InstanceFile, MetricInstance), CoreError> {
    let file = InstanceFile::read(path)?;
    let inst = build_instance(&file)?;
    Ok((file, inst))
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), CoreError> {
    match out {
        Some(path) => std::fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode, CoreError> {
    match cli.command {
        Command::Gen(args) => {
            let generator = match args.generator {
                GeneratorKind::EuclideanUniform => Generator::EuclideanUniform {
                    n: args.n.ok_or_else(|| usage("--n is required"))?,
                    m: args.m.unwrap_or(0),
                    dim: args.dim,
                    box_size: args.box_size,
                },
                GeneratorKind::RandomMetric => Generator::RandomMetric {
                    n: args.n.ok_or_else(|| usage("--n is required"))?,
                    m: args.m.unwrap_or(0),
                },
                GeneratorKind::Graph => Generator::Graph {
                    path: args.path.ok_or_else(|| usage("--path is required"))?,
                },
                GeneratorKind::FrtCounterexample => Generator::FrtCounterexample {
                    b: args.b.ok_or_else(|| usage("--b is required"))?,
                },
                GeneratorKind::DspReduction => Generator::DspReduction {
                    path: args.path.ok_or_else(|| usage("--path is required"))?,
                },
            };
            let spec = InstanceSpec {
                generator,
                seed: cli.seed,
                alpha: args.alpha,
                normalize: args.normalize,
            };
            let generated = generate(&spec)?;
            if let Some(probe) = &generated.probe {
                eprintln!(
                    "designated probe: center {} radius {}",
                    probe.center, probe.radius
                );
            }
            emit(&cli.out, &(generated.file.to_json()? + "\n"))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::PartitionStats(args) => {
            if args.subset != "all" {
                return Err(usage("only --subset all is supported"));
            }
            let (_, inst) = load_instance(&args.instance)?;
            let scheme = match args.scheme {
                SchemeArg::Rand => Scheme::RandPartition,
                SchemeArg::Frt => Scheme::Frt,
            };
            let probe = Ball::new(args.probe_center, args.probe_radius);
            let stats = intersection_stats(
                &inst,
                &inst.all_points(),
                &probe,
                scheme,
                args.trials,
                cli.seed,
                args.strict,
            )?;
            emit(&cli.out, &harness::intersection_stats_csv(&stats))?;
            eprintln!(
                "mean blocks intersected {:.6} (se {:.6}), non-terminal {:.6} (se {:.6})",
                stats.mean_intersect,
                stats.se_intersect,
                stats.mean_nonterminal,
                stats.se_nonterminal
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::SolveMcc(args) => {
            let (_, inst) = load_instance(&args.instance)?;
            let solver = ExperimentSolver::Mcc {
                epsilon: args.epsilon,
                max_enum: args.max_enum,
            };
            let mut report = solve_once(&inst, &solver, cli.seed)?;
            if args.exact {
                attach_oracle(&mut report, &inst, &solver)?;
            }
            emit(&cli.out, &(serde_json::to_string_pretty(&report)? + "\n"))?;
            eprintln!("solved in {} ms", report.wall_ms);
            Ok(if report.valid {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::SolveKcluster(args) => {
            let (_, inst) = load_instance(&args.instance)?;
            let solver = ExperimentSolver::Kcluster {
                k: args.k,
                epsilon: args.epsilon,
                max_enum: args.max_enum,
            };
            let mut report = solve_once(&inst, &solver, cli.seed)?;
            if args.exact {
                attach_oracle(&mut report, &inst, &solver)?;
            }
            emit(&cli.out, &(serde_json::to_string_pretty(&report)? + "\n"))?;
            eprintln!("solved in {} ms", report.wall_ms);
            Ok(if report.valid {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Exact(args) => {
            let (_, inst) = load_instance(&args.instance)?;
            let clients = inst.clients();
            let (label, cover) = match args.k {
                Some(k) => ("exact-kcluster", exact_kcluster(&inst, &clients, k)?),
                None => ("exact-mcc", exact_mcc(&inst, &clients, args.max_balls)?),
            };
            let report = serde_json::json!({
                "solver": label,
                "cover": cover.balls(),
                "cost": cover.cost(),
                "ball_count": cover.ball_count(),
            });
            emit(&cli.out, &(serde_json::to_string_pretty(&report)? + "\n"))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::ReduceDsp(args) => {
            let gf = GraphFile::read(&args.graph)?;
            let graph = Graph::new(gf.n, &gf.edges)?;
            let inst = reduce_dsp_to_mcc(&graph)?;
            let file = to_matrix_file(&inst);
            emit(&cli.out, &(file.to_json()? + "\n"))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::VerifyReduction(args) => {
            let gf = GraphFile::read(&args.graph)?;
            let graph = Graph::new(gf.n, &gf.edges)?;
            let report = verify_reduction(&graph)?;
            emit(&cli.out, &(serde_json::to_string_pretty(&report)? + "\n"))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Experiment(args) => {
            if args.seeds.is_empty() {
                return Err(usage("--seeds must list at least one seed"));
            }
            let (file, inst) = load_instance(&args.instance)?;
            let digest = instance_digest(&file)?;
            let solver = match args.solver {
                SolverArg::Mcc => ExperimentSolver::Mcc {
                    epsilon: args.epsilon.ok_or_else(|| usage("--epsilon is required"))?,
                    max_enum: args.max_enum,
                },
                SolverArg::Kcluster => ExperimentSolver::Kcluster {
                    k: args.k.ok_or_else(|| usage("--k is required"))?,
                    epsilon: args.epsilon.ok_or_else(|| usage("--epsilon is required"))?,
                    max_enum: args.max_enum,
                },
                SolverArg::PartitionStats => ExperimentSolver::PartitionStats {
                    probe_center: args
                        .probe_center
                        .ok_or_else(|| usage("--probe-center is required"))?,
                    probe_radius: args
                        .probe_radius
                        .ok_or_else(|| usage("--probe-radius is required"))?,
                    trials: args.trials,
                },
            };
            let result = run_experiment(&inst, &digest, &solver, &args.seeds)?;
            let json = serde_json::to_string_pretty(&result)? + "\n";
            let csv = harness::rows_to_csv(&result.rows);
            match &cli.out {
                Some(prefix) => {
                    std::fs::write(with_ext(prefix, "json"), &json)?;
                    std::fs::write(with_ext(prefix, "csv"), &csv)?;
                }
                None => match cli.format {
                    Format::Json => print!("{json}"),
                    Format::Csv => print!("{csv}"),
                },
            }
            Ok(if result.all_valid {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

fn attach_oracle(
    report: &mut harness::SolveReport,
    inst: &MetricInstance,
    solver: &ExperimentSolver,
) -> Result<(), CoreError> {
    let limit = match solver {
        ExperimentSolver::Mcc { .. } => EXACT_MCC_LIMIT,
        ExperimentSolver::Kcluster { .. } => EXACT_KCLUSTER_LIMIT,
        ExperimentSolver::PartitionStats { .. } => return Ok(()),
    };
    if inst.clients().len() > limit {
        report.oracle_skipped = Some(true);
        return Ok(());
    }
    let oracle = harness::oracle_cost(inst, solver)?;
    report.exact_cost = oracle;
    report.ratio = oracle.and_then(|o| (o > 0.0).then(|| report.cost / o));
    Ok(())
}

fn with_ext(prefix: &Path, ext: &str) -> PathBuf {
    let mut p = prefix.to_path_buf();
    p.set_extension(ext);
    p
}

fn usage(msg: &str) -> CoreError {
    CoreError::UsageError(msg.into())
}
