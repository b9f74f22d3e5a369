//! Minimum cost covering: the recursive point-cover solver and an exact
//! bitmask oracle.
//!
//! The solver guesses the expensive part of a cover — the few balls whose
//! radius is large relative to the current subset's diameter — and recurses
//! on the blocks of a random low-diameter partition for the rest. Guessing
//! iterates over subsets of the large-ball set; since two guesses with the
//! same coverage on the current subset and the same cost are
//! interchangeable, the iteration is organized as a sweep over coverage
//! patterns with a min-cost set-cover table per pattern. This visits the
//! same candidate space as literal subset enumeration (every pattern's table
//! entry is a real ball subset, and every ball subset is dominated by its
//! own coverage pattern) at 2^|P| instead of 2^|D| work per call.

use crate::error::{Error, Result};
use crate::metric::{
    candidate_balls, is_cover, Ball, BallMode, CandidateBallSet, Cover, MetricInstance, PointId,
};
use crate::params::{aspect_level, level, structure_bound_mcc};
use crate::partition::{derive_partition_seed, rand_partition};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// Exact oracle size limit (bitmask DP over client subsets).
pub const EXACT_MCC_LIMIT: usize = 20;

/// Largest subset solved by the coverage-pattern sweep; larger subsets fall
/// back to literal enumeration over a capped ball set.
const PATTERN_LIMIT: usize = 18;

/// Ball-set cap applied automatically when a subset is too large for the
/// pattern sweep and no explicit cap was configured.
const AUTO_CAP: usize = 12;

const SALT_PARTITION: u64 = 0x6d63633a70617274; // namespace tag for partition seeds

/// Tunables for the point-cover solver.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MccConfig {
    pub epsilon: f64,
    /// Base-case threshold: subsets smaller than this are solved exactly.
    pub kappa_base: usize,
    /// The partitioning-lemma constant used to derive gamma.
    pub lemma_constant: f64,
    /// Optional cap on the number of large balls considered per call. When
    /// it binds, the result is still a valid cover but the approximation
    /// guarantee no longer applies and the run is reported as not faithful.
    pub max_enum: Option<usize>,
    pub seed: u64,
}

impl MccConfig {
    pub fn new(epsilon: f64, seed: u64) -> Self {
        MccConfig {
            epsilon,
            kappa_base: 3,
            lemma_constant: 64.0,
            max_enum: None,
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.epsilon.is_nan() || self.epsilon <= 0.0 {
            return Err(Error::Precondition("epsilon must be positive".into()));
        }
        if self.kappa_base < 1 {
            return Err(Error::Precondition("kappa_base must be at least 1".into()));
        }
        Ok(())
    }
}

/// Which branch produced a call's result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    BaseCase,
    SingleBall,
    Guess,
}

/// One solved subset in the recursion.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TraceNode {
    pub subset_size: usize,
    pub level: u32,
    pub depth: u32,
    pub candidates_tried: usize,
    pub branch: Branch,
    pub cost: f64,
}

/// Flat record of every distinct subset the solver worked on.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct RecursionTrace {
    pub nodes: Vec<TraceNode>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TraceSummary {
    pub calls: usize,
    pub max_depth: u32,
    pub base_cases: usize,
    pub candidates_tried: usize,
}

impl RecursionTrace {
    pub fn summary(&self) -> TraceSummary {
        TraceSummary {
            calls: self.nodes.len(),
            max_depth: self.nodes.iter().map(|n| n.depth).max().unwrap_or(0),
            base_cases: self
                .nodes
                .iter()
                .filter(|n| n.branch == Branch::BaseCase)
                .count(),
            candidates_tried: self.nodes.iter().map(|n| n.candidates_tried).sum(),
        }
    }
}

/// Result of a point-cover run.
#[derive(Debug, Clone)]
pub struct MccSolution {
    pub cover: Cover,
    /// False when an enumeration cap was applied somewhere in the run.
    pub faithful: bool,
    pub trace: RecursionTrace,
    pub lambda: f64,
    pub gamma: f64,
    pub big_l: u32,
    pub enum_cap: usize,
}

/// Solver parameters fixed at the top level from the full client set.
#[derive(Debug, Clone, Copy)]
pub struct MccParams {
    pub lambda: f64,
    pub gamma: f64,
    pub big_l: u32,
    pub enum_cap: usize,
    pub n_top: usize,
}

/// Derives lambda, gamma, L, and the enumeration cap from the client set.
pub fn derive_params(inst: &MetricInstance, cfg: &MccConfig) -> Result<MccParams> {
    let clients = inst.clients();
    let diam_x = if clients.is_empty() {
        0.0
    } else {
        inst.diam(&clients)?
    };
    let big_l = aspect_level(diam_x);
    let lambda = cfg.epsilon / (2.0 * big_l as f64);
    let n = clients.len().max(2) as f64;
    let gamma = (cfg.lemma_constant * n.log2() / lambda).max(1.0);
    let (enum_cap, _) = structure_bound_mcc(inst.alpha(), lambda, gamma);
    Ok(MccParams {
        lambda,
        gamma,
        big_l,
        enum_cap,
        n_top: clients.len(),
    })
}

fn check_normalization(inst: &MetricInstance) -> Result<()> {
    if let Some(min) = inst.min_client_distance() {
        if min < 1.0 - 1e-9 {
            return Err(Error::Precondition(format!(
                "minimum client interpoint distance must be at least 1 (got {min}); \
                 rescale the instance first"
            )));
        }
    }
    Ok(())
}

/// Covers all clients of the instance.
pub fn point_cover(inst: &MetricInstance, cfg: &MccConfig) -> Result<MccSolution> {
    let clients = inst.clients();
    point_cover_subset(inst, &clients, cfg)
}

/// Covers a client subset, with lambda and gamma still derived from the full
/// client set.
pub fn point_cover_subset(
    inst: &MetricInstance,
    p: &[PointId],
    cfg: &MccConfig,
) -> Result<MccSolution> {
    cfg.validate()?;
    check_normalization(inst)?;
    let cands = candidate_balls(inst, BallMode::Mcc)?;
    let params = derive_params(inst, cfg)?;
    let mut engine = Engine {
        inst,
        cands: &cands,
        alpha: inst.alpha(),
        cfg,
        params,
        memo: HashMap::new(),
        trace: RecursionTrace::default(),
        capped: false,
    };
    let mut subset = p.to_vec();
    subset.sort_unstable();
    subset.dedup();
    let cover = engine.solve(&subset, 0)?;
    Ok(MccSolution {
        cover,
        faithful: !engine.capped,
        trace: engine.trace,
        lambda: params.lambda,
        gamma: params.gamma,
        big_l: params.big_l,
        enum_cap: params.enum_cap,
    })
}

struct Engine<'a> {
    inst: &'a MetricInstance,
    cands: &'a CandidateBallSet,
    alpha: f64,
    cfg: &'a MccConfig,
    params: MccParams,
    memo: HashMap<Vec<PointId>, Cover>,
    trace: RecursionTrace,
    capped: bool,
}

impl Engine<'_> {
    fn solve(&mut self, p: &[PointId], depth: u32) -> Result<Cover> {
        if p.is_empty() {
            return Ok(Cover::empty());
        }
        if let Some(hit) = self.memo.get(p) {
            return Ok(hit.clone());
        }
        let diam = self.inst.diam(p)?;
        let lvl = level(diam);

        if p.len() < self.cfg.kappa_base {
            let cover = exact_mcc_with(self.inst, self.cands, p, Some(self.cfg.kappa_base))?;
            self.trace.nodes.push(TraceNode {
                subset_size: p.len(),
                level: lvl,
                depth,
                candidates_tried: 0,
                branch: Branch::BaseCase,
                cost: cover.cost(),
            });
            self.memo.insert(p.to_vec(), cover.clone());
            return Ok(cover);
        }

        let single = best_single_ball_with(self.inst, self.cands, p)?;
        let mut best = single.clone();
        let mut branch = Branch::SingleBall;
        let mut tried = 1usize;

        let seed = derive_partition_seed(self.cfg.seed, p, SALT_PARTITION);
        let partition = rand_partition(self.inst, p, self.params.n_top.max(p.len()), seed)?;
        debug_assert!(partition
            .blocks
            .iter()
            .all(|b| level(self.inst.diam(b).unwrap()) < lvl || b.len() <= 1));

        let threshold = diam / self.params.gamma;
        let mut large: Vec<Ball> = self
            .cands
            .balls()
            .iter()
            .copied()
            .filter(|b| b.radius > threshold)
            .collect();
        let cap = self.effective_cap(p.len(), large.len());
        if large.len() > cap {
            large.sort_by(|a, b| {
                a.radius
                    .total_cmp(&b.radius)
                    .then_with(|| a.center.cmp(&b.center))
            });
            large.truncate(cap);
            large.sort_by_key(|b| (b.center, b.radius.to_bits()));
            self.capped = true;
        }

        if p.len() <= PATTERN_LIMIT {
            self.guess_by_patterns(
                p,
                &partition.blocks,
                &large,
                depth,
                &mut best,
                &mut branch,
                &mut tried,
            )?;
        } else {
            self.guess_by_subsets(
                p,
                &partition.blocks,
                &large,
                depth,
                &mut best,
                &mut branch,
                &mut tried,
            )?;
        }

        if !is_cover(self.inst, &best, p) {
            return Err(Error::InvariantViolation(
                "point-cover produced a non-cover".into(),
            ));
        }
        if best.cost() > single.cost() + 1e-9 {
            return Err(Error::InvariantViolation(
                "point-cover exceeded the single-ball candidate".into(),
            ));
        }
        self.trace.nodes.push(TraceNode {
            subset_size: p.len(),
            level: lvl,
            depth,
            candidates_tried: tried,
            branch,
            cost: best.cost(),
        });
        self.memo.insert(p.to_vec(), best.clone());
        Ok(best)
    }

    fn effective_cap(&mut self, subset_len: usize, large_len: usize) -> usize {
        match self.cfg.max_enum {
            Some(m) => m,
            None if subset_len > PATTERN_LIMIT && large_len > AUTO_CAP => AUTO_CAP,
            None => large_len,
        }
    }

    /// Sweep over coverage patterns of `p`, with a min-cost "cover at least
    /// this pattern with at most s large balls" table.
    #[allow(clippy::too_many_arguments)]
    fn guess_by_patterns(
        &mut self,
        p: &[PointId],
        blocks: &[Vec<PointId>],
        large: &[Ball],
        depth: u32,
        best: &mut Cover,
        branch: &mut Branch,
        tried: &mut usize,
    ) -> Result<()> {
        let n = p.len();
        let size = 1usize << n;
        let index_of: HashMap<PointId, usize> =
            p.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let table =
            PatternTable::build(self.inst, self.alpha, p, large, self.params.enum_cap.min(n));
        let block_masks: Vec<usize> = blocks
            .iter()
            .map(|b| b.iter().map(|x| 1usize << index_of[x]).sum())
            .collect();

        // Child covers depend only on P_i \ C, so cache them per residual
        // mask while sweeping patterns.
        let mut child_cache: HashMap<(usize, usize), (f64, usize)> = HashMap::new();
        let mut best_key = (best.cost(), best.ball_count());
        let mut best_pattern: Option<(usize, Vec<(usize, usize)>)> = None;

        for pattern in 0..size {
            let Some((guess_cost, guess_count)) = table.query(pattern) else {
                continue;
            };
            *tried += 1;
            let mut total = guess_cost;
            let mut count = guess_count;
            let mut residuals = Vec::with_capacity(block_masks.len());
            for (bi, &bm) in block_masks.iter().enumerate() {
                let residual = bm & !pattern;
                residuals.push((bi, residual));
                if residual == 0 {
                    continue;
                }
                let (c, k) = match child_cache.get(&(bi, residual)) {
                    Some(&v) => v,
                    None => {
                        let child_points: Vec<PointId> = (0..n)
                            .filter(|&i| residual & (1 << i) != 0)
                            .map(|i| p[i])
                            .collect();
                        let child = self.solve(&child_points, depth + 1)?;
                        let v = (child.cost(), child.ball_count());
                        child_cache.insert((bi, residual), v);
                        v
                    }
                };
                total += c;
                count += k;
            }
            let better = total
                .total_cmp(&best_key.0)
                .then_with(|| count.cmp(&best_key.1))
                .is_lt();
            if better {
                best_key = (total, count);
                best_pattern = Some((pattern, residuals));
            }
        }

        if let Some((pattern, residuals)) = best_pattern {
            let mut balls = table.reconstruct(pattern);
            for (_, residual) in residuals {
                if residual == 0 {
                    continue;
                }
                let child_points: Vec<PointId> = (0..n)
                    .filter(|&i| residual & (1 << i) != 0)
                    .map(|i| p[i])
                    .collect();
                let child = self.solve(&child_points, depth + 1)?;
                balls.extend_from_slice(child.balls());
            }
            let cand = Cover::new(balls, self.alpha);
            if cand.cmp_quality(best).is_lt() {
                *best = cand;
                *branch = Branch::Guess;
            }
        }
        Ok(())
    }

    /// Literal subset enumeration over a (capped) large-ball list; used when
    /// the subset is too big for the pattern sweep.
    #[allow(clippy::too_many_arguments)]
    fn guess_by_subsets(
        &mut self,
        _p: &[PointId],
        blocks: &[Vec<PointId>],
        large: &[Ball],
        depth: u32,
        best: &mut Cover,
        branch: &mut Branch,
        tried: &mut usize,
    ) -> Result<()> {
        let m = large.len().min(20);
        if large.len() > m {
            self.capped = true;
        }
        let large = &large[..m];
        let size_cap = self.params.enum_cap.min(m);
        let ball_costs: Vec<f64> = large.iter().map(|b| b.cost(self.alpha)).collect();
        for q in 0..(1usize << m) {
            if (q.count_ones() as usize) > size_cap {
                continue;
            }
            *tried += 1;
            let chosen: Vec<Ball> = (0..m)
                .filter(|&i| q & (1 << i) != 0)
                .map(|i| large[i])
                .collect();
            let guess_cost: f64 = (0..m)
                .filter(|&i| q & (1 << i) != 0)
                .map(|i| ball_costs[i])
                .sum();
            if guess_cost >= best.cost() + 1e-12 {
                continue;
            }
            let mut balls = chosen.clone();
            let mut ok = true;
            for block in blocks {
                let residual: Vec<PointId> = block
                    .iter()
                    .copied()
                    .filter(|&x| !chosen.iter().any(|b| self.inst.d(b.center, x) <= b.radius))
                    .collect();
                if residual.is_empty() {
                    continue;
                }
                let child = self.solve(&residual, depth + 1)?;
                balls.extend_from_slice(child.balls());
                if cover_partial_cost(&balls, self.alpha) >= best.cost() + 1e-12 {
                    ok = false;
                    break;
                }
            }
            if !ok {
                continue;
            }
            let cand = Cover::new(balls, self.alpha);
            if cand.cmp_quality(best).is_lt() {
                *best = cand;
                *branch = Branch::Guess;
            }
        }
        Ok(())
    }
}

fn cover_partial_cost(balls: &[Ball], alpha: f64) -> f64 {
    balls.iter().map(|b| b.cost(alpha)).sum()
}

/// Min-cost "cover at least this pattern" table over the large-ball list.
struct PatternTable {
    cost: Vec<f64>,
    count: Vec<usize>,
    /// Chosen ball (index into `balls`) for the pattern's lowest point, or
    /// usize::MAX when the entry came from the (s-1)-layer.
    choice: Vec<usize>,
    balls: Vec<Ball>,
    masks: Vec<usize>,
}

impl PatternTable {
    fn build(
        inst: &MetricInstance,
        alpha: f64,
        p: &[PointId],
        large: &[Ball],
        size_cap: usize,
    ) -> PatternTable {
        let n = p.len();
        let size = 1usize << n;
        // Coverage mask of each ball on p; keep only the cheapest ball per
        // distinct mask (ties by (center, radius) via the sorted input).
        let mut by_mask: HashMap<usize, usize> = HashMap::new();
        let mut balls: Vec<Ball> = Vec::new();
        let mut masks: Vec<usize> = Vec::new();
        for &b in large {
            let mut mask = 0usize;
            for (i, &x) in p.iter().enumerate() {
                if inst.d(b.center, x) <= b.radius {
                    mask |= 1 << i;
                }
            }
            if mask == 0 {
                continue;
            }
            match by_mask.get(&mask) {
                Some(&idx) if balls[idx].cost(alpha) <= b.cost(alpha) => {}
                Some(&idx) => {
                    balls[idx] = b;
                }
                None => {
                    by_mask.insert(mask, balls.len());
                    balls.push(b);
                    masks.push(mask);
                }
            }
        }
        let mut covering: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, &mask) in masks.iter().enumerate() {
            for (bit, cover_list) in covering.iter_mut().enumerate() {
                if mask & (1 << bit) != 0 {
                    cover_list.push(i);
                }
            }
        }
        let mut cost = vec![f64::INFINITY; size];
        let mut count = vec![usize::MAX; size];
        let mut choice = vec![usize::MAX; size];
        cost[0] = 0.0;
        count[0] = 0;
        // The size cap only binds when it is below n: an irredundant
        // achiever covers a private point per ball, so at most n balls are
        // ever needed.
        let unbounded = size_cap >= n;
        for mask in 1..size {
            let low = mask.trailing_zeros() as usize;
            for &bi in &covering[low] {
                let prev = mask & !masks[bi];
                if cost[prev].is_infinite() {
                    continue;
                }
                if !unbounded && count[prev] + 1 > size_cap {
                    continue;
                }
                let c = cost[prev] + balls[bi].cost(alpha);
                let k = count[prev] + 1;
                if c.total_cmp(&cost[mask])
                    .then_with(|| k.cmp(&count[mask]))
                    .is_lt()
                {
                    cost[mask] = c;
                    count[mask] = k;
                    choice[mask] = bi;
                }
            }
        }
        PatternTable {
            cost,
            count,
            choice,
            balls,
            masks,
        }
    }

    fn query(&self, pattern: usize) -> Option<(f64, usize)> {
        if self.cost[pattern].is_finite() {
            Some((self.cost[pattern], self.count[pattern]))
        } else {
            None
        }
    }

    fn reconstruct(&self, mut pattern: usize) -> Vec<Ball> {
        let mut out = Vec::new();
        while pattern != 0 {
            let bi = self.choice[pattern];
            debug_assert_ne!(bi, usize::MAX);
            out.push(self.balls[bi]);
            pattern &= !self.masks[bi];
        }
        out
    }
}

/// The cheapest single candidate ball covering all of `p`.
pub fn best_single_ball(inst: &MetricInstance, p: &[PointId]) -> Result<Cover> {
    let cands = candidate_balls(inst, BallMode::Mcc)?;
    best_single_ball_with(inst, &cands, p)
}

fn best_single_ball_with(
    inst: &MetricInstance,
    cands: &CandidateBallSet,
    p: &[PointId],
) -> Result<Cover> {
    if p.is_empty() {
        return Err(Error::EmptySubset);
    }
    let mut best: Option<Ball> = None;
    let mut seen_center = usize::MAX;
    for ball in cands.balls() {
        if ball.center == seen_center {
            continue;
        }
        seen_center = ball.center;
        let radius = p
            .iter()
            .map(|&x| inst.d(ball.center, x))
            .fold(0.0f64, f64::max);
        let cand = Ball::new(ball.center, radius);
        let better = match &best {
            None => true,
            Some(b) => cand
                .cost(inst.alpha())
                .total_cmp(&b.cost(inst.alpha()))
                .then_with(|| cand.center.cmp(&b.center))
                .then_with(|| cand.radius.total_cmp(&b.radius))
                .is_lt(),
        };
        if better {
            best = Some(cand);
        }
    }
    let ball = best.expect("candidate set has at least one center");
    debug_assert!(cands.contains(&ball));
    Ok(Cover::new(vec![ball], inst.alpha()))
}

/// Exact minimum-cost cover of `p` by candidate balls, optionally restricted
/// to at most `max_balls` balls. Bitmask DP over covered client subsets.
pub fn exact_mcc(inst: &MetricInstance, p: &[PointId], max_balls: Option<usize>) -> Result<Cover> {
    let cands = candidate_balls(inst, BallMode::Mcc)?;
    exact_mcc_with(inst, &cands, p, max_balls)
}

fn exact_mcc_with(
    inst: &MetricInstance,
    cands: &CandidateBallSet,
    p: &[PointId],
    max_balls: Option<usize>,
) -> Result<Cover> {
    exact_cover_dp(inst, cands.balls(), p, max_balls)
}

/// Shared exact weighted set-cover DP used by both oracles.
pub(crate) fn exact_cover_dp(
    inst: &MetricInstance,
    candidate_list: &[Ball],
    p: &[PointId],
    max_balls: Option<usize>,
) -> Result<Cover> {
    let mut subset = p.to_vec();
    subset.sort_unstable();
    subset.dedup();
    let n = subset.len();
    if n > EXACT_MCC_LIMIT {
        return Err(Error::TooLarge(n, EXACT_MCC_LIMIT));
    }
    if n == 0 {
        return Ok(Cover::empty());
    }
    let alpha = inst.alpha();
    // Keep the cheapest ball per coverage mask.
    let mut by_mask: HashMap<usize, usize> = HashMap::new();
    let mut balls: Vec<Ball> = Vec::new();
    let mut masks: Vec<usize> = Vec::new();
    for &b in candidate_list {
        let mut mask = 0usize;
        for (i, &x) in subset.iter().enumerate() {
            if inst.d(b.center, x) <= b.radius {
                mask |= 1 << i;
            }
        }
        if mask == 0 {
            continue;
        }
        match by_mask.get(&mask) {
            Some(&idx) if balls[idx].cost(alpha) <= b.cost(alpha) => {}
            Some(&idx) => balls[idx] = b,
            None => {
                by_mask.insert(mask, balls.len());
                balls.push(b);
                masks.push(mask);
            }
        }
    }
    let size = 1usize << n;
    let full = size - 1;
    let mut covering: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, &mask) in masks.iter().enumerate() {
        for (bit, list) in covering.iter_mut().enumerate() {
            if mask & (1 << bit) != 0 {
                list.push(i);
            }
        }
    }
    let layers = max_balls.map(|m| m.min(n.max(1))).unwrap_or(n) + 1;
    // dp[s][mask]: cheapest cover of `mask` using at most s balls.
    let mut cost = vec![vec![f64::INFINITY; size]; layers];
    let mut count = vec![vec![usize::MAX; size]; layers];
    let mut choice = vec![vec![usize::MAX; size]; layers];
    for s in 0..layers {
        cost[s][0] = 0.0;
        count[s][0] = 0;
    }
    for s in 1..layers {
        for mask in 1..size {
            // carry the (s-1)-layer entry
            cost[s][mask] = cost[s - 1][mask];
            count[s][mask] = count[s - 1][mask];
            choice[s][mask] = usize::MAX;
            let low = mask.trailing_zeros() as usize;
            for &bi in &covering[low] {
                let prev = mask & !masks[bi];
                if cost[s - 1][prev].is_infinite() {
                    continue;
                }
                let c = cost[s - 1][prev] + balls[bi].cost(alpha);
                let k = count[s - 1][prev] + 1;
                if c.total_cmp(&cost[s][mask])
                    .then_with(|| k.cmp(&count[s][mask]))
                    .is_lt()
                {
                    cost[s][mask] = c;
                    count[s][mask] = k;
                    choice[s][mask] = bi;
                }
            }
        }
    }
    let top = layers - 1;
    if cost[top][full].is_infinite() {
        return Err(Error::Infeasible);
    }
    let mut chosen = Vec::new();
    let mut s = top;
    let mut mask = full;
    while mask != 0 {
        if choice[s][mask] == usize::MAX {
            debug_assert!(s > 0);
            s -= 1;
            continue;
        }
        let bi = choice[s][mask];
        chosen.push(balls[bi]);
        mask &= !masks[bi];
        s -= 1;
    }
    Ok(Cover::new(chosen, alpha))
}

/// Aspect-ratio preprocessing stub.
///
/// The full reduction that bounds the aspect ratio polynomially (at a
/// (1 + epsilon) cost to the optimum) is out of scope; this returns the
/// instance unchanged and reports the recursion bound L it implies.
pub fn preprocess_aspect_ratio(inst: &MetricInstance, _epsilon: f64) -> (MetricInstance, u32) {
    let clients = inst.clients();
    let diam = if clients.is_empty() {
        0.0
    } else {
        inst.diam(&clients).unwrap_or(0.0)
    };
    (inst.clone(), aspect_level(diam))
}
