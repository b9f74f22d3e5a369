//! Randomized low-diameter partitioning.
//!
//! Two schemes are implemented. The primary scheme samples an independent
//! radius for every center from a truncated-geometric distribution whose
//! interval masses halve step by step; this keeps the expected number of
//! blocks that touch any small probe ball at `1 + O((r / diam) log n)`. The
//! rival scheme uses a single uniform radius and a random center
//! permutation; on the adversarial spider instance built by
//! [`build_frt_counterexample`] its expected intersection count grows like
//! `sqrt(n) / log n`.

use crate::error::{Error, Result};
use crate::metric::{Ball, MetricInstance, PointId, Role};
use crate::seeding::mix64;
use crate::stats;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Slack allowed on top of the analytic `diam(P)/2` block bound; distances
/// carry the metric-validation tolerance.
const DIAM_SLACK: f64 = 1e-9;

/// The truncated-geometric radius distribution on `[delta/8, delta/4]`.
///
/// The support is split into `ceil(log2 k)` equal-width intervals. Interval
/// `j` (1-based) carries mass `2^-j`, except the last, which carries
/// `2^-(J-1)` so that the masses sum to one and every prefix mass equals the
/// mass of the remaining tail exactly.
#[derive(Debug, Clone)]
pub struct TruncGeomDist {
    delta: f64,
    k: usize,
    masses: Vec<f64>,
    width: f64,
}

/// Number of intervals: smallest `J` with `2^J >= k`.
pub fn num_intervals(k: usize) -> usize {
    (usize::BITS - (k - 1).leading_zeros()) as usize
}

/// Builds `dist(delta, k)`.
pub fn make_dist(delta: f64, k: usize) -> Result<TruncGeomDist> {
    if !delta.is_finite() || delta <= 0.0 {
        return Err(Error::InvalidDelta(delta));
    }
    if k < 2 {
        return Err(Error::InvalidK(k));
    }
    let j_count = num_intervals(k);
    let mut masses = Vec::with_capacity(j_count);
    for j in 1..j_count {
        masses.push(0.5f64.powi(j as i32));
    }
    masses.push(0.5f64.powi(j_count as i32 - 1));
    let width = (delta / 8.0) / j_count as f64;
    Ok(TruncGeomDist {
        delta,
        k,
        masses,
        width,
    })
}

impl TruncGeomDist {
    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn num_intervals(&self) -> usize {
        self.masses.len()
    }

    /// Per-interval masses, 0-indexed.
    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn interval_width(&self) -> f64 {
        self.width
    }

    /// Bounds of interval `j` (0-based). The last interval is pinned to end
    /// exactly at `delta/4`.
    pub fn interval(&self, j: usize) -> (f64, f64) {
        let lo = self.delta / 8.0;
        let hi = self.delta / 4.0;
        if j + 1 == self.masses.len() {
            (hi - self.width, hi)
        } else {
            (lo + j as f64 * self.width, lo + (j + 1) as f64 * self.width)
        }
    }

    /// 0-based index of the interval containing `x`, for `x` in the support.
    pub fn interval_of(&self, x: f64) -> usize {
        let lo = self.delta / 8.0;
        let idx = ((x - lo) / self.width).floor() as isize;
        idx.clamp(0, self.masses.len() as isize - 1) as usize
    }

    /// Draws a radius: pick an interval by its mass, then a uniform point
    /// inside it.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let mut chosen = self.masses.len() - 1;
        for (j, &m) in self.masses.iter().enumerate() {
            acc += m;
            if u < acc {
                chosen = j;
                break;
            }
        }
        let (lo, hi) = self.interval(chosen);
        let v: f64 = rng.random();
        (lo + v * (hi - lo)).clamp(self.delta / 8.0, self.delta / 4.0)
    }
}

/// Which partitioning scheme produced a partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    RandPartition,
    Frt,
}

/// An ordered partition of a point subset into disjoint non-empty blocks.
#[derive(Debug, Clone)]
pub struct Partition {
    pub blocks: Vec<Vec<PointId>>,
    pub source: Scheme,
    pub seed: u64,
    /// Sampled radii, for audit: one per center for the primary scheme, a
    /// single value for the rival scheme.
    pub betas: Vec<f64>,
}

impl Partition {
    /// Checks disjointness, that the union equals `p`, and the per-block
    /// diameter bound.
    pub fn validate(&self, inst: &MetricInstance, p: &[PointId]) -> Result<()> {
        self.validate_with_diam(inst, p, inst.diam(p)?)
    }

    fn validate_with_diam(&self, inst: &MetricInstance, p: &[PointId], diam: f64) -> Result<()> {
        let mut seen = std::collections::BTreeSet::new();
        for block in &self.blocks {
            if block.is_empty() {
                return Err(Error::InvariantViolation("empty block emitted".into()));
            }
            for &x in block {
                if !seen.insert(x) {
                    return Err(Error::InvariantViolation(format!(
                        "point {x} appears in two blocks"
                    )));
                }
            }
        }
        let expect: std::collections::BTreeSet<_> = p.iter().copied().collect();
        if seen != expect {
            return Err(Error::InvariantViolation(
                "union of blocks does not equal the input subset".into(),
            ));
        }
        let half = diam / 2.0 + DIAM_SLACK;
        for block in &self.blocks {
            if inst.diam(block)? > half {
                return Err(Error::InvariantViolation(format!(
                    "block diameter exceeds half the subset diameter ({} > {half})",
                    inst.diam(block)?
                )));
            }
        }
        Ok(())
    }
}

fn sorted_subset(p: &[PointId]) -> Vec<PointId> {
    let mut q = p.to_vec();
    q.sort_unstable();
    q.dedup();
    q
}

/// Runs the primary scheme: centers in ascending point-id order, each with
/// an independent radius from `dist(diam(P), n_param)`.
pub fn rand_partition(
    inst: &MetricInstance,
    p: &[PointId],
    n_param: usize,
    seed: u64,
) -> Result<Partition> {
    let points = sorted_subset(p);
    let diam = if points.is_empty() {
        0.0
    } else {
        inst.diam(&points)?
    };
    rand_partition_prepared(inst, &points, diam, n_param, seed)
}

fn rand_partition_prepared(
    inst: &MetricInstance,
    points: &[PointId],
    diam: f64,
    n_param: usize,
    seed: u64,
) -> Result<Partition> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    if n_param < points.len() {
        return Err(Error::BadPartitionParam(points.len(), n_param));
    }
    if points.len() == 1 || diam == 0.0 {
        let part = Partition {
            blocks: vec![points.to_vec()],
            source: Scheme::RandPartition,
            seed,
            betas: Vec::new(),
        };
        part.validate_with_diam(inst, points, diam)?;
        return Ok(part);
    }
    let dist = make_dist(diam, n_param)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (blocks, betas) = assign_blocks(inst, points, |_center, rng| dist.sample(rng), &mut rng);
    let part = Partition {
        blocks,
        source: Scheme::RandPartition,
        seed,
        betas,
    };
    part.validate_with_diam(inst, points, diam)?;
    Ok(part)
}

/// Runs the rival scheme: one radius uniform on `[diam/8, diam/4]` and a
/// uniformly random center permutation.
pub fn frt_partition(inst: &MetricInstance, p: &[PointId], seed: u64) -> Result<Partition> {
    let points = sorted_subset(p);
    let diam = if points.is_empty() {
        0.0
    } else {
        inst.diam(&points)?
    };
    frt_partition_prepared(inst, &points, diam, seed)
}

fn frt_partition_prepared(
    inst: &MetricInstance,
    points: &[PointId],
    diam: f64,
    seed: u64,
) -> Result<Partition> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    if points.len() == 1 || diam == 0.0 {
        let part = Partition {
            blocks: vec![points.to_vec()],
            source: Scheme::Frt,
            seed,
            betas: Vec::new(),
        };
        part.validate_with_diam(inst, points, diam)?;
        return Ok(part);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lo = diam / 8.0;
    let beta = lo + rng.random::<f64>() * (diam / 4.0 - lo);
    let mut perm = points.to_vec();
    perm.shuffle(&mut rng);
    let mut dummy = ChaCha8Rng::seed_from_u64(seed);
    let (blocks, _) = assign_blocks(inst, &perm, |_, _| beta, &mut dummy);
    let part = Partition {
        blocks,
        source: Scheme::Frt,
        seed,
        betas: vec![beta],
    };
    part.validate_with_diam(inst, points, diam)?;
    Ok(part)
}

/// Shared assignment loop: every point takes a turn as a center in the given
/// order and claims the still-unassigned points within its radius. A point's
/// own turn always claims it if nothing did earlier, so the union covers the
/// input.
fn assign_blocks<R: Rng>(
    inst: &MetricInstance,
    order: &[PointId],
    mut radius_for: impl FnMut(PointId, &mut R) -> f64,
    rng: &mut R,
) -> (Vec<Vec<PointId>>, Vec<f64>) {
    let mut assigned = vec![false; order.len()];
    let mut remaining = order.len();
    let mut blocks = Vec::new();
    let mut betas = Vec::with_capacity(order.len());
    for &center in order {
        let beta = radius_for(center, rng);
        betas.push(beta);
        if remaining == 0 {
            continue;
        }
        let mut block = Vec::new();
        for (idx, &x) in order.iter().enumerate() {
            if !assigned[idx] && inst.d(x, center) <= beta {
                assigned[idx] = true;
                block.push(x);
            }
        }
        remaining -= block.len();
        if !block.is_empty() {
            block.sort_unstable();
            blocks.push(block);
        }
    }
    (blocks, betas)
}

/// The adversarial spider instance plus its designated probe ball.
#[derive(Debug, Clone)]
pub struct FrtCounterexample {
    pub instance: MetricInstance,
    /// Ball centered at the hub with radius equal to the spoke length.
    pub probe: Ball,
    pub delta: f64,
    pub hub: PointId,
}

/// Builds the weighted-tree instance on `b^2 + b + 2` points: a hub with `b`
/// short spokes, `b` leaves hanging off each spoke at radius `delta/4`, and
/// one pendant at `3 delta / 4` that stretches the diameter to `delta`.
/// `delta` is normalized to `16 log2 n` so the spoke length is 1.
pub fn build_frt_counterexample(b: usize) -> Result<FrtCounterexample> {
    if b < 2 {
        return Err(Error::UsageError("counterexample requires b >= 2".into()));
    }
    let n = b * b + b + 2;
    let log2n = (n as f64).log2();
    let delta = 16.0 * log2n;
    let spoke_w = 1.0;
    let leaf_w = delta / 4.0 - spoke_w;
    let pendant_w = 3.0 * delta / 4.0;
    let hub = 0;
    let pendant = n - 1;
    let mut edges = Vec::with_capacity(b + b * b + 1);
    for i in 1..=b {
        edges.push((hub, i, spoke_w));
        for l in 0..b {
            let leaf = b + (i - 1) * b + l + 1;
            edges.push((i, leaf, leaf_w));
        }
    }
    edges.push((hub, pendant, pendant_w));
    let instance = MetricInstance::from_graph(vec![Role::Both; n], &edges, 1.0)?;
    Ok(FrtCounterexample {
        instance,
        probe: Ball::new(hub, spoke_w),
        delta,
        hub,
    })
}

/// Per-trial intersection counts of a probe ball against repeated random
/// partitions, with empirical means and standard errors.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IntersectionStats {
    pub trials: usize,
    /// (blocks intersected, blocks non-terminally intersected), one row per
    /// trial in trial order.
    pub counts: Vec<(u64, u64)>,
    pub mean_intersect: f64,
    pub se_intersect: f64,
    pub mean_nonterminal: f64,
    pub se_nonterminal: f64,
}

/// Runs `trials` partitions of `p` under `scheme` and counts, per trial, how
/// many blocks intersect the probe ball and how many do so non-terminally
/// (i.e. are not the last intersecting block in generation order).
///
/// With `strict` set, the probe must satisfy the lemma regime
/// `r <= diam(P) / (16 log2 n)` with `n = |P|`.
///
/// Trials fan out in parallel; trial `t` uses seed `seed + t`, so results do
/// not depend on the schedule.
pub fn intersection_stats(
    inst: &MetricInstance,
    p: &[PointId],
    probe: &Ball,
    scheme: Scheme,
    trials: usize,
    seed: u64,
    strict: bool,
) -> Result<IntersectionStats> {
    let points = sorted_subset(p);
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    let diam = inst.diam(&points)?;
    if strict {
        let bound = diam / (16.0 * (points.len() as f64).log2());
        if probe.radius > bound * (1.0 + 1e-9) + 1e-12 {
            return Err(Error::OutOfRegime {
                r: probe.radius,
                bound,
            });
        }
    }
    let n_param = points.len();
    let counts: Vec<(u64, u64)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let trial_seed = seed.wrapping_add(t as u64);
            let part = match scheme {
                Scheme::RandPartition => {
                    rand_partition_prepared(inst, &points, diam, n_param, trial_seed)
                }
                Scheme::Frt => frt_partition_prepared(inst, &points, diam, trial_seed),
            }
            .expect("partition of a validated subset cannot fail");
            let hit: Vec<bool> = part
                .blocks
                .iter()
                .map(|block| {
                    block
                        .iter()
                        .any(|&x| inst.d(probe.center, x) <= probe.radius)
                })
                .collect();
            let total = hit.iter().filter(|&&h| h).count() as u64;
            let nonterminal = if total > 0 { total - 1 } else { 0 };
            // Cross-check against the positional definition: every
            // intersecting block except the last is non-terminal.
            if let Some(last) = hit.iter().rposition(|&h| h) {
                let by_position = hit[..last].iter().filter(|&&h| h).count() as u64;
                debug_assert_eq!(by_position, nonterminal);
            }
            (total, nonterminal)
        })
        .collect();
    let totals: Vec<f64> = counts.iter().map(|&(t, _)| t as f64).collect();
    let nonterms: Vec<f64> = counts.iter().map(|&(_, nt)| nt as f64).collect();
    Ok(IntersectionStats {
        trials,
        mean_intersect: stats::mean(&totals),
        se_intersect: stats::standard_error(&totals),
        mean_nonterminal: stats::mean(&nonterms),
        se_nonterminal: stats::standard_error(&nonterms),
        counts,
    })
}

/// Seed for the trial-`t` partition inside [`intersection_stats`].
pub fn trial_seed(seed: u64, trial: usize) -> u64 {
    seed.wrapping_add(trial as u64)
}

/// Derives an independent partition seed for a solver call on a subset.
pub fn derive_partition_seed(run_seed: u64, subset: &[PointId], salt: u64) -> u64 {
    mix64(mix64(run_seed, crate::seeding::subset_hash(subset)), salt)
}
