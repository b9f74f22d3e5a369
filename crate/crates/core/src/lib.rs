//! Metric ball-cover and clustering algorithms built on randomized
//! low-diameter partitioning, with exact brute-force oracles and a seeded
//! experiment harness.
//!
//! - [`metric`]: point sets, distance matrices, balls, covers, and the
//!   candidate ball set every solver draws from.
//! - [`partition`]: the truncated-geometric radius sampler, the primary and
//!   rival partitioning schemes, the adversarial spider instance, and
//!   Monte-Carlo intersection statistics.
//! - [`mcc`]: the recursive point-cover solver and the exact covering
//!   oracle.
//! - [`kcluster`]: the budgeted clustering solver, the budget-splitting
//!   suffix DP, and the exact clustering oracle.
//! - [`reduction`]: the dominating-set gadget and its round-trip verifier.
//! - [`harness`]: instance generators, normalization, and the experiment
//!   runner with CSV/JSON reports.
//!
//! # Example
//!
//! ```
//! use ballcover_core::mcc::{exact_mcc, point_cover, MccConfig};
//! use ballcover_core::{MetricInstance, Role};
//!
//! // Three clients on a line, two servers between them.
//! let coords = vec![vec![0.0], vec![1.0], vec![2.0], vec![0.5], vec![1.8]];
//! let roles = vec![
//!     Role::Client,
//!     Role::Client,
//!     Role::Client,
//!     Role::Server,
//!     Role::Server,
//! ];
//! let inst = MetricInstance::from_euclidean(roles, &coords, 1.0).unwrap();
//!
//! let sol = point_cover(&inst, &MccConfig::new(0.5, 7)).unwrap();
//! let opt = exact_mcc(&inst, &inst.clients(), None).unwrap();
//! assert!(sol.cover.cost() >= opt.cost() - 1e-9);
//! assert!(ballcover_core::is_cover(&inst, &sol.cover, &inst.clients()));
//! ```

pub mod error;
pub mod harness;
pub mod kcluster;
pub mod mcc;
pub mod metric;
pub mod params;
pub mod partition;
pub mod reduction;
pub mod schema;
pub mod seeding;
pub mod stats;

pub use error::{Error, Result};
pub use harness::{
    generate, instance_digest, run_experiment, ExperimentSolver, Generator, InstanceSpec,
};
pub use kcluster::{budget_dp, clustering, exact_kcluster, KclusterConfig, KclusterSolution};
pub use mcc::{best_single_ball, exact_mcc, point_cover, MccConfig, MccSolution};
pub use metric::{
    candidate_balls, cover_cost, is_cover, Ball, BallMode, CandidateBallSet, Cover, MetricInstance,
    PointId, Role,
};
pub use partition::{
    build_frt_counterexample, frt_partition, intersection_stats, make_dist, rand_partition,
    FrtCounterexample, IntersectionStats, Partition, Scheme, TruncGeomDist,
};
pub use reduction::{min_dominating_set, reduce_dsp_to_mcc, verify_reduction, Graph};
pub use schema::{build_instance, GraphFile, InstanceFile, MetricDef, PointDef};
