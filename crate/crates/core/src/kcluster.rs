//! Bicriteria k-clustering: budgeted recursive covering and an exact
//! bitmask oracle.
//!
//! The solver mirrors the point-cover recursion but carries a ball budget.
//! Each call retries several independent partitions, guesses the large balls
//! by coverage pattern and count, recurses on the residual blocks over a
//! range of budgets, and splits the remaining budget across blocks with a
//! suffix dynamic program. Candidates that would blow the per-level ball
//! bound `floor((1 + 3 lambda)^level * budget)` are discarded.

use crate::error::{Error, Result};
use crate::mcc::{Branch, RecursionTrace, TraceNode};
use crate::metric::{
    candidate_balls, is_cover, Ball, BallMode, CandidateBallSet, Cover, MetricInstance, PointId,
};
use crate::params::{aspect_level, ceil_tol, level, structure_bound_kcluster};
use crate::seeding::{mix_many, subset_hash};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// Exact oracle size limit.
pub const EXACT_KCLUSTER_LIMIT: usize = 16;

const PATTERN_LIMIT: usize = 18;
const AUTO_CAP: usize = 12;
const SALT_KCLUSTER: u64 = 0x6b633a73656564;

/// Tunables for the clustering solver.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KclusterConfig {
    pub epsilon: f64,
    pub k: usize,
    /// Base-case threshold: subsets smaller than this are solved exactly.
    pub beta_base: usize,
    pub lemma_constant: f64,
    pub max_enum: Option<usize>,
    pub seed: u64,
}

impl KclusterConfig {
    pub fn new(epsilon: f64, k: usize, seed: u64) -> Self {
        KclusterConfig {
            epsilon,
            k,
            beta_base: 3,
            lemma_constant: 64.0,
            max_enum: None,
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.epsilon.is_nan() || self.epsilon <= 0.0 {
            return Err(Error::Precondition("epsilon must be positive".into()));
        }
        if self.k < 1 {
            return Err(Error::Precondition("k must be at least 1".into()));
        }
        if self.beta_base < 1 {
            return Err(Error::Precondition("beta_base must be at least 1".into()));
        }
        Ok(())
    }
}

/// Result of a clustering run.
#[derive(Debug, Clone)]
pub struct KclusterSolution {
    pub cover: Cover,
    pub faithful: bool,
    pub trace: RecursionTrace,
    pub lambda: f64,
    pub gamma: f64,
    pub big_l: u32,
    /// Top-level ball bound `floor((1 + epsilon) * k)`.
    pub budget_bound: usize,
}

/// Floor with tolerance: values a few ulps under an integer floor to it.
pub fn floor_tol(x: f64) -> usize {
    ((x + 1e-9).floor()).max(0.0) as usize
}

/// Number of independent partition retries per call.
pub fn repetitions(n: usize) -> usize {
    if n < 2 {
        return 1;
    }
    (ceil_tol(2.0 * (n as f64).ln() / 1.5f64.ln()) as usize).max(1)
}

#[derive(Debug, Clone, Copy)]
struct KcParams {
    lambda: f64,
    gamma: f64,
    big_l: u32,
    large_cap: usize,
    n_top: usize,
    reps: usize,
}

fn derive_params(inst: &MetricInstance, cfg: &KclusterConfig) -> Result<KcParams> {
    let clients = inst.clients();
    if clients.is_empty() {
        return Err(Error::NoClients);
    }
    let diam_x = inst.diam(&clients)?;
    let big_l = aspect_level(diam_x);
    let lambda = cfg.epsilon / (6.0 * big_l as f64);
    let n = clients.len().max(2) as f64;
    let gamma = (cfg.lemma_constant * n.log2() / lambda).max(1.0);
    let (large_cap, _) = structure_bound_kcluster(inst.alpha(), gamma);
    Ok(KcParams {
        lambda,
        gamma,
        big_l,
        large_cap,
        n_top: clients.len(),
        reps: repetitions(clients.len()),
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

/// Clusters all clients with at most `floor((1 + epsilon) * k)` balls.
pub fn clustering(inst: &MetricInstance, cfg: &KclusterConfig) -> Result<KclusterSolution> {
    let clients = inst.clients();
    clustering_subset(inst, &clients, cfg.k, cfg)
}

/// Clusters a client subset under an explicit budget, with parameters still
/// derived from the full client set.
pub fn clustering_subset(
    inst: &MetricInstance,
    p: &[PointId],
    kappa: usize,
    cfg: &KclusterConfig,
) -> Result<KclusterSolution> {
    cfg.validate()?;
    check_normalization(inst)?;
    let cands = candidate_balls(inst, BallMode::Kcluster)?;
    let params = derive_params(inst, cfg)?;
    let mut engine = KcEngine {
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
    let cover = engine.solve(&subset, kappa, 0)?.ok_or(Error::Infeasible)?;
    Ok(KclusterSolution {
        cover,
        faithful: !engine.capped,
        trace: engine.trace,
        lambda: params.lambda,
        gamma: params.gamma,
        big_l: params.big_l,
        budget_bound: floor_tol((1.0 + cfg.epsilon) * cfg.k as f64),
    })
}

struct KcEngine<'a> {
    inst: &'a MetricInstance,
    cands: &'a CandidateBallSet,
    alpha: f64,
    cfg: &'a KclusterConfig,
    params: KcParams,
    memo: HashMap<(Vec<PointId>, usize), Option<Cover>>,
    trace: RecursionTrace,
    capped: bool,
}

impl KcEngine<'_> {
    fn solve(&mut self, p: &[PointId], kappa: usize, depth: u32) -> Result<Option<Cover>> {
        if p.is_empty() {
            return Ok(Some(Cover::empty()));
        }
        if kappa == 0 {
            return Ok(None);
        }
        let key = (p.to_vec(), kappa);
        if let Some(hit) = self.memo.get(&key) {
            return Ok(hit.clone());
        }
        let diam = self.inst.diam(p)?;
        let lvl = level(diam);
        let bound = floor_tol((1.0 + 3.0 * self.params.lambda).powi(lvl as i32) * kappa as f64);

        if p.len() < self.cfg.beta_base {
            let cover =
                exact_kcluster_with(self.inst, self.cands, p, kappa.min(self.cfg.beta_base))?;
            self.trace.nodes.push(TraceNode {
                subset_size: p.len(),
                level: lvl,
                depth,
                candidates_tried: 0,
                branch: Branch::BaseCase,
                cost: cover.cost(),
            });
            self.memo.insert(key, Some(cover.clone()));
            return Ok(Some(cover));
        }

        let single = best_single_cluster_ball(self.inst, self.cands, p)?;
        debug_assert!(bound >= 1);
        let mut best = single.clone();
        let mut branch = Branch::SingleBall;
        let mut tried = 1usize;

        let master = mix_many(
            self.cfg.seed,
            &[subset_hash(p), kappa as u64, SALT_KCLUSTER],
        );
        let mut seeder = ChaCha8Rng::seed_from_u64(master);
        let one_plus = 1.0 + 3.0 * self.params.lambda;

        for _rep in 0..self.params.reps {
            let part_seed: u64 = seeder.random();
            let partition = crate::partition::rand_partition(
                self.inst,
                p,
                self.params.n_top.max(p.len()),
                part_seed,
            )?;
            let threshold = diam / self.params.gamma;
            let mut large: Vec<Ball> = self
                .cands
                .balls()
                .iter()
                .copied()
                .filter(|b| b.radius > threshold)
                .collect();
            let cap = match self.cfg.max_enum {
                Some(m) => m,
                None if p.len() > PATTERN_LIMIT && large.len() > AUTO_CAP => AUTO_CAP,
                None => large.len(),
            };
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
                self.guess_iteration(
                    p,
                    &partition.blocks,
                    &large,
                    kappa,
                    bound,
                    one_plus,
                    depth,
                    &mut best,
                    &mut branch,
                    &mut tried,
                )?;
            } else {
                self.guess_iteration_literal(
                    &partition.blocks,
                    &large,
                    kappa,
                    bound,
                    one_plus,
                    depth,
                    &mut best,
                    &mut branch,
                    &mut tried,
                )?;
            }
        }

        if !is_cover(self.inst, &best, p) {
            return Err(Error::InvariantViolation(
                "clustering produced a non-cover".into(),
            ));
        }
        if best.ball_count() > bound {
            return Err(Error::InvariantViolation(format!(
                "clustering used {} balls, over the bound {bound}",
                best.ball_count()
            )));
        }
        self.trace.nodes.push(TraceNode {
            subset_size: p.len(),
            level: lvl,
            depth,
            candidates_tried: tried,
            branch,
            cost: best.cost(),
        });
        self.memo.insert(key, Some(best.clone()));
        Ok(Some(best))
    }

    /// One partition iteration of the guessing loop, organized by coverage
    /// pattern and guess size.
    #[allow(clippy::too_many_arguments)]
    fn guess_iteration(
        &mut self,
        p: &[PointId],
        blocks: &[Vec<PointId>],
        large: &[Ball],
        kappa: usize,
        bound: usize,
        one_plus: f64,
        depth: u32,
        best: &mut Cover,
        branch: &mut Branch,
        tried: &mut usize,
    ) -> Result<()> {
        let n = p.len();
        let size = 1usize << n;
        let index_of: HashMap<PointId, usize> =
            p.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let s_max = self.params.large_cap.min(n).min(bound);
        let table = SizedPatternTable::build(self.inst, self.alpha, p, large, s_max);
        let block_masks: Vec<usize> = blocks
            .iter()
            .map(|b| b.iter().map(|x| 1usize << index_of[x]).sum())
            .collect();
        let max_rem = floor_tol(one_plus * kappa as f64);

        // Every residual a pattern can leave in a block is a submask of the
        // block; precompute its cover row over the full budget range.
        let mut rows_cache: HashMap<(usize, usize), Vec<Option<Cover>>> = HashMap::new();
        for (bi, &bm) in block_masks.iter().enumerate() {
            let mut r = bm;
            loop {
                let child_points: Vec<PointId> = (0..n)
                    .filter(|&i| r & (1 << i) != 0)
                    .map(|i| p[i])
                    .collect();
                let mut row = Vec::with_capacity(max_rem + 1);
                for k1 in 0..=max_rem {
                    row.push(self.solve(&child_points, k1, depth + 1)?);
                }
                rows_cache.insert((bi, r), row);
                if r == 0 {
                    break;
                }
                r = (r - 1) & bm;
            }
        }

        for pattern in 0..size {
            for s in 0..=s_max {
                let Some((guess_cost, guess_count)) = table.query(pattern, s) else {
                    continue;
                };
                // A (pattern, s-1) entry with the same achiever dominates:
                // same cost, larger remaining budget.
                if s > 0 && table.query(pattern, s - 1) == Some((guess_cost, guess_count)) {
                    continue;
                }
                if guess_cost >= best.cost() {
                    continue;
                }
                *tried += 1;
                let rem_budget = if kappa >= s {
                    floor_tol(one_plus * (kappa - s) as f64)
                } else {
                    0
                };
                let rows: Vec<&[Option<Cover>]> = block_masks
                    .iter()
                    .enumerate()
                    .map(|(bi, &bm)| {
                        let residual = bm & !pattern;
                        &rows_cache[&(bi, residual)][..=rem_budget]
                    })
                    .collect();
                let Some(combined) = budget_dp(&rows, rem_budget, self.alpha)? else {
                    continue;
                };
                let total_count = guess_count + combined.ball_count();
                if total_count > bound {
                    continue;
                }
                let mut balls = table.reconstruct(pattern, s);
                balls.extend_from_slice(combined.balls());
                let cand = Cover::new(balls, self.alpha);
                if cand.cmp_quality(best).is_lt() {
                    *best = cand;
                    *branch = Branch::Guess;
                }
            }
        }
        Ok(())
    }

    /// Literal subset enumeration fallback for large subsets.
    #[allow(clippy::too_many_arguments)]
    fn guess_iteration_literal(
        &mut self,
        blocks: &[Vec<PointId>],
        large: &[Ball],
        kappa: usize,
        bound: usize,
        one_plus: f64,
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
        let s_cap = self.params.large_cap.min(m).min(bound);
        for q in 0..(1usize << m) {
            let s = q.count_ones() as usize;
            if s > s_cap {
                continue;
            }
            *tried += 1;
            let chosen: Vec<Ball> = (0..m)
                .filter(|&i| q & (1 << i) != 0)
                .map(|i| large[i])
                .collect();
            let rem_budget = if kappa >= s {
                floor_tol(one_plus * (kappa - s) as f64)
            } else {
                0
            };
            let mut rows: Vec<Vec<Option<Cover>>> = Vec::with_capacity(blocks.len());
            for block in blocks {
                let residual: Vec<PointId> = block
                    .iter()
                    .copied()
                    .filter(|&x| !chosen.iter().any(|b| self.inst.d(b.center, x) <= b.radius))
                    .collect();
                let mut row = Vec::with_capacity(rem_budget + 1);
                for k1 in 0..=rem_budget {
                    row.push(self.solve(&residual, k1, depth + 1)?);
                }
                rows.push(row);
            }
            let row_refs: Vec<&[Option<Cover>]> = rows.iter().map(|r| r.as_slice()).collect();
            let Some(combined) = budget_dp(&row_refs, rem_budget, self.alpha)? else {
                continue;
            };
            if chosen.len() + combined.ball_count() > bound {
                continue;
            }
            let mut balls = chosen;
            balls.extend_from_slice(combined.balls());
            let cand = Cover::new(balls, self.alpha);
            if cand.cmp_quality(best).is_lt() {
                *best = cand;
                *branch = Branch::Guess;
            }
        }
        Ok(())
    }
}

/// Splits a total ball budget across blocks to minimize the combined cost.
///
/// `rows[i][k]` is the cover computed for block `i` under budget `k` (`None`
/// when infeasible); every row must extend to `total_budget`. The result is
/// the minimum over all budget vectors whose sum is at most `total_budget`
/// of the per-block cover union, computed by a suffix dynamic program whose
/// base row is prefix-minimized over budgets. Split ties go to the smaller
/// first budget.
pub fn budget_dp(
    rows: &[&[Option<Cover>]],
    total_budget: usize,
    alpha: f64,
) -> Result<Option<Cover>> {
    let tau = rows.len();
    if tau == 0 {
        return Ok(Some(Cover::empty()));
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() < total_budget + 1 {
            return Err(Error::MissingEntry(i, row.len()));
        }
    }
    let key = |c: &Option<Cover>| -> Option<(f64, usize)> {
        c.as_ref().map(|c| (c.cost(), c.ball_count()))
    };
    let better = |a: (f64, usize), b: (f64, usize)| -> bool {
        a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)).is_lt()
    };

    // suffix[i][k]: best (cost, count) covering blocks i.. with total budget
    // at most k, plus the chosen split for reconstruction.
    let mut suffix: Vec<Vec<Option<(f64, usize)>>> = vec![vec![None; total_budget + 1]; tau];
    let mut pick: Vec<Vec<usize>> = vec![vec![usize::MAX; total_budget + 1]; tau];

    // Base row: prefix-min over budgets, so unused budget never hurts.
    for k in 0..=total_budget {
        let own = key(&rows[tau - 1][k]).map(|v| (v, k));
        let carry = if k > 0 {
            suffix[tau - 1][k - 1].map(|v| (v, pick[tau - 1][k - 1]))
        } else {
            None
        };
        let chosen = match (carry, own) {
            (Some((cv, ck)), Some((ov, _))) if !better(ov, cv) => Some((cv, ck)),
            (_, Some((ov, ok))) => Some((ov, ok)),
            (Some((cv, ck)), None) => Some((cv, ck)),
            (None, None) => None,
        };
        if let Some((v, k_used)) = chosen {
            suffix[tau - 1][k] = Some(v);
            pick[tau - 1][k] = k_used;
        }
    }

    for i in (0..tau.saturating_sub(1)).rev() {
        for k in 0..=total_budget {
            let mut best: Option<((f64, usize), usize)> = None;
            for k1 in 0..=k {
                let Some(own) = key(&rows[i][k1]) else {
                    continue;
                };
                let Some(rest) = suffix[i + 1][k - k1] else {
                    continue;
                };
                let cand = (own.0 + rest.0, own.1 + rest.1);
                let improves = match &best {
                    None => true,
                    Some((cur, _)) => better(cand, *cur),
                };
                if improves {
                    best = Some((cand, k1));
                }
            }
            if let Some((v, k1)) = best {
                suffix[i][k] = Some(v);
                pick[i][k] = k1;
            }
        }
    }

    if suffix[0][total_budget].is_none() {
        return Ok(None);
    }
    // Reconstruct the winning split.
    let mut balls = Vec::new();
    let mut k = total_budget;
    for i in 0..tau {
        let k1 = pick[i][k];
        debug_assert_ne!(k1, usize::MAX);
        let cover = rows[i][k1]
            .as_ref()
            .expect("reconstruction follows feasible picks");
        balls.extend_from_slice(cover.balls());
        if i + 1 < tau {
            k -= k1;
        }
    }
    Ok(Some(Cover::new(balls, alpha)))
}

/// The cheapest single candidate ball (centered in the client set) covering
/// all of `p`.
fn best_single_cluster_ball(
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
    Ok(Cover::new(
        vec![best.expect("non-empty candidate set")],
        inst.alpha(),
    ))
}

/// Exact minimum-cost cover of `p` by at most `k` candidate balls centered
/// in the client set.
pub fn exact_kcluster(inst: &MetricInstance, p: &[PointId], k: usize) -> Result<Cover> {
    let cands = candidate_balls(inst, BallMode::Kcluster)?;
    exact_kcluster_with(inst, &cands, p, k)
}

fn exact_kcluster_with(
    inst: &MetricInstance,
    cands: &CandidateBallSet,
    p: &[PointId],
    k: usize,
) -> Result<Cover> {
    let mut subset = p.to_vec();
    subset.sort_unstable();
    subset.dedup();
    if subset.len() > EXACT_KCLUSTER_LIMIT {
        return Err(Error::TooLarge(subset.len(), EXACT_KCLUSTER_LIMIT));
    }
    crate::mcc::exact_cover_dp(inst, cands.balls(), &subset, Some(k))
}

/// Min-cost "cover at least this pattern with exactly this layer budget"
/// table; layered by ball count so candidates know their guess size.
struct SizedPatternTable {
    /// cost[s][pattern], count[s][pattern]: cheapest set of at most s balls
    /// covering at least `pattern`.
    cost: Vec<Vec<f64>>,
    count: Vec<Vec<usize>>,
    choice: Vec<Vec<usize>>,
    balls: Vec<Ball>,
    masks: Vec<usize>,
}

impl SizedPatternTable {
    fn build(
        inst: &MetricInstance,
        alpha: f64,
        p: &[PointId],
        large: &[Ball],
        s_max: usize,
    ) -> SizedPatternTable {
        let n = p.len();
        let size = 1usize << n;
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
                Some(&idx) => balls[idx] = b,
                None => {
                    by_mask.insert(mask, balls.len());
                    balls.push(b);
                    masks.push(mask);
                }
            }
        }
        let mut covering: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, &mask) in masks.iter().enumerate() {
            for (bit, list) in covering.iter_mut().enumerate() {
                if mask & (1 << bit) != 0 {
                    list.push(i);
                }
            }
        }
        let layers = s_max + 1;
        let mut cost = vec![vec![f64::INFINITY; size]; layers];
        let mut count = vec![vec![usize::MAX; size]; layers];
        let mut choice = vec![vec![usize::MAX; size]; layers];
        for s in 0..layers {
            cost[s][0] = 0.0;
            count[s][0] = 0;
        }
        for s in 1..layers {
            for mask in 1..size {
                cost[s][mask] = cost[s - 1][mask];
                count[s][mask] = count[s - 1][mask];
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
        SizedPatternTable {
            cost,
            count,
            choice,
            balls,
            masks,
        }
    }

    fn query(&self, pattern: usize, s: usize) -> Option<(f64, usize)> {
        if self.cost[s][pattern].is_finite() {
            Some((self.cost[s][pattern], self.count[s][pattern]))
        } else {
            None
        }
    }

    fn reconstruct(&self, mut pattern: usize, mut s: usize) -> Vec<Ball> {
        let mut out = Vec::new();
        while pattern != 0 {
            // choice is unset when the entry was carried from the previous
            // layer.
            if self.choice[s][pattern] == usize::MAX {
                debug_assert!(s > 0);
                s -= 1;
                continue;
            }
            let bi = self.choice[s][pattern];
            out.push(self.balls[bi]);
            pattern &= !self.masks[bi];
            s -= 1;
        }
        out
    }
}
