//! The dominating-set hardness gadget: reduces dominating set to ball
//! covering with the cost exponent tied to log of the client count, plus a
//! brute-force dominating-set solver and a round-trip verifier.

use crate::error::{Error, Result};
use crate::mcc::exact_mcc;
use crate::metric::{MetricInstance, Role};
use serde::{Deserialize, Serialize};

/// Brute-force limit for the dominating-set search.
pub const DOMINATION_LIMIT: usize = 20;
/// Exact-oracle limit for the round-trip verifier (client count).
pub const VERIFY_LIMIT: usize = 12;

/// Simple undirected graph: vertex count plus a sorted, deduplicated edge
/// list of unordered pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut norm = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) out of range 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at {u}")));
            }
            norm.push((u.min(v), u.max(v)));
        }
        norm.sort_unstable();
        let before = norm.len();
        norm.dedup();
        if norm.len() != before {
            return Err(Error::InvalidGraph("duplicate edge".into()));
        }
        Ok(Graph { n, edges: norm })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        let key = (u.min(v), u.max(v));
        self.edges.binary_search(&key).is_ok()
    }

    /// Closed neighborhoods as bitmasks, for domination checks.
    fn closed_neighborhoods(&self) -> Vec<u64> {
        let mut nb: Vec<u64> = (0..self.n).map(|v| 1u64 << v).collect();
        for &(u, v) in &self.edges {
            nb[u] |= 1 << v;
            nb[v] |= 1 << u;
        }
        nb
    }
}

/// Builds the covering instance for a graph: one client and one server per
/// vertex; client-server distance 1 on closed-neighborhood pairs, 3
/// otherwise, and 2 between same-role points. The exponent is log2 of the
/// vertex count (clamped to 1 for the single-vertex graph, where any
/// exponent gives the same optimum).
#[allow(clippy::needless_range_loop)]
pub fn reduce_dsp_to_mcc(g: &Graph) -> Result<MetricInstance> {
    let n = g.n();
    if n == 0 {
        return Err(Error::InvalidGraph("empty graph".into()));
    }
    let alpha = (n as f64).log2().max(1.0);
    let total = 2 * n;
    let mut m = vec![vec![0.0f64; total]; total];
    // Clients are 0..n, servers are n..2n.
    for i in 0..total {
        for j in 0..total {
            if i == j {
                continue;
            }
            let (ci, cj) = (i < n, j < n);
            m[i][j] = if ci == cj {
                2.0
            } else {
                let (x, y) = if ci { (i, j - n) } else { (j, i - n) };
                if x == y || g.has_edge(x, y) {
                    1.0
                } else {
                    3.0
                }
            };
        }
    }
    let mut roles = vec![Role::Client; n];
    roles.extend(std::iter::repeat_n(Role::Server, n));
    MetricInstance::from_matrix(roles, m, alpha)
}

/// Minimum-cardinality dominating set by brute force over subsets in
/// increasing size, lexicographic within a size.
pub fn min_dominating_set(g: &Graph) -> Result<Vec<usize>> {
    let n = g.n();
    if n > DOMINATION_LIMIT {
        return Err(Error::TooLarge(n, DOMINATION_LIMIT));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let nb = g.closed_neighborhoods();
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    for size in 1..=n {
        let mut chosen = Vec::with_capacity(size);
        if search_dominating(&nb, full, 0, size, &mut chosen) {
            return Ok(chosen);
        }
    }
    unreachable!("the full vertex set always dominates")
}

fn search_dominating(
    nb: &[u64],
    full: u64,
    start: usize,
    remaining: usize,
    chosen: &mut Vec<usize>,
) -> bool {
    if remaining == 0 {
        let covered = chosen.iter().fold(0u64, |acc, &v| acc | nb[v]);
        return covered == full;
    }
    for v in start..=(nb.len() - remaining) {
        chosen.push(v);
        if search_dominating(nb, full, v + 1, remaining - 1, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// Outcome of the round-trip verification.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReductionReport {
    pub n: usize,
    pub domination_number: usize,
    pub mcc_cost: f64,
    pub dominating_set: Vec<usize>,
    /// True when every ball in the exact optimum has radius exactly 1.
    pub radii_all_one: bool,
}

/// Computes the domination number and the exact covering optimum of the
/// reduced instance, and checks that they agree.
pub fn verify_reduction(g: &Graph) -> Result<ReductionReport> {
    if g.n() > VERIFY_LIMIT {
        return Err(Error::TooLarge(g.n(), VERIFY_LIMIT));
    }
    let dominating_set = min_dominating_set(g)?;
    let domination = dominating_set.len();
    let inst = reduce_dsp_to_mcc(g)?;
    let clients = inst.clients();
    let cover = exact_mcc(&inst, &clients, None)?;
    let mcc_cost = cover.cost();
    if (mcc_cost - domination as f64).abs() > 1e-9 {
        return Err(Error::Mismatch {
            domination,
            mcc_cost,
        });
    }
    let radii_all_one = cover.balls().iter().all(|b| b.radius == 1.0);
    if !radii_all_one {
        return Err(Error::InvariantViolation(
            "optimal reduced cover used a ball of radius != 1".into(),
        ));
    }
    Ok(ReductionReport {
        n: g.n(),
        domination_number: domination,
        mcc_cost,
        dominating_set,
        radii_all_one,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::new(n, &edges).unwrap()
    }

    fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                edges.push((i, j));
            }
        }
        Graph::new(n, &edges).unwrap()
    }

    fn star(leaves: usize) -> Graph {
        let edges: Vec<(usize, usize)> = (1..=leaves).map(|i| (0, i)).collect();
        Graph::new(leaves + 1, &edges).unwrap()
    }

    #[test]
    fn graph_validation() {
        assert!(Graph::new(2, &[(0, 0)]).is_err());
        assert!(Graph::new(2, &[(0, 1), (1, 0)]).is_err());
        assert!(Graph::new(2, &[(0, 2)]).is_err());
        let g = Graph::new(3, &[(2, 0), (0, 1)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (0, 2)]);
    }

    #[test]
    fn reduced_triangle_all_neighbors() {
        let inst = reduce_dsp_to_mcc(&complete(3)).unwrap();
        // All client-server pairs are at distance 1.
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(inst.d(i, 3 + j), 1.0);
            }
        }
        assert_eq!(inst.d(0, 1), 2.0);
        assert_eq!(inst.d(3, 4), 2.0);
    }

    #[test]
    fn reduced_edgeless_pair() {
        let g = Graph::new(2, &[]).unwrap();
        let inst = reduce_dsp_to_mcc(&g).unwrap();
        assert_eq!(inst.d(0, 2), 1.0); // x_1 to y_1
        assert_eq!(inst.d(0, 3), 3.0); // x_1 to y_2
    }

    #[test]
    fn reduced_instances_are_metric() {
        // Construction succeeds only if the metric validates; exercise a few
        // shapes.
        for g in [cycle(5), complete(4), star(4), Graph::new(1, &[]).unwrap()] {
            reduce_dsp_to_mcc(&g).unwrap();
        }
    }

    #[test]
    fn domination_examples() {
        assert_eq!(min_dominating_set(&complete(3)).unwrap().len(), 1);
        let edgeless = Graph::new(4, &[]).unwrap();
        assert_eq!(min_dominating_set(&edgeless).unwrap().len(), 4);
        assert_eq!(min_dominating_set(&cycle(5)).unwrap().len(), 2);
        assert_eq!(min_dominating_set(&star(4)).unwrap().len(), 1);
        // Lexicographically first witness.
        assert_eq!(min_dominating_set(&star(4)).unwrap(), vec![0]);
    }

    #[test]
    fn verify_examples() {
        for (g, expect) in [
            (complete(3), 1),
            (cycle(5), 2),
            (star(4), 1),
            (Graph::new(1, &[]).unwrap(), 1),
        ] {
            let report = verify_reduction(&g).unwrap();
            assert_eq!(report.domination_number, expect);
            assert_eq!(report.mcc_cost, expect as f64);
            assert!(report.radii_all_one);
        }
    }

    #[test]
    fn exponent_beats_client_count() {
        // 3^(log2 n) > n with a strict margin for all n >= 2.
        for n in 2..=1_000_000usize {
            let alpha = (n as f64).log2();
            assert!(3f64.powf(alpha) > n as f64, "n = {n}");
        }
    }

    #[test]
    fn radius_one_ball_members_are_closed_neighborhood() {
        // On the reduced instance, B(y_j, 1) holds exactly the clients of
        // v_j's closed neighborhood plus y_j itself.
        let g = cycle(5);
        let inst = reduce_dsp_to_mcc(&g).unwrap();
        let n = g.n();
        for j in 0..n {
            let ball = crate::metric::Ball::new(n + j, 1.0);
            let members = inst.ball_members(&ball, &(0..2 * n).collect::<Vec<_>>());
            let mut expect: Vec<usize> = (0..n).filter(|&i| i == j || g.has_edge(i, j)).collect();
            expect.push(n + j);
            expect.sort_unstable();
            assert_eq!(members, expect, "j = {j}");
        }
    }

    #[test]
    fn candidate_radii_on_reduced_instance() {
        let g = cycle(6);
        let inst = reduce_dsp_to_mcc(&g).unwrap();
        let cands = crate::metric::candidate_balls(&inst, crate::metric::BallMode::Mcc).unwrap();
        for b in cands.balls() {
            assert!(b.radius == 1.0 || b.radius == 3.0);
        }
        // At most two distinct radii per center after dedup.
        assert!(cands.len() <= 3 * g.n());
    }

    #[test]
    fn best_single_ball_on_reduced_instance() {
        // With alpha forced to 1: cost 3 unless some vertex dominates all
        // others (then a radius-1 ball suffices).
        let rebuild_alpha_one = |g: &Graph| {
            let inst = reduce_dsp_to_mcc(g).unwrap();
            let n = inst.num_points();
            let d = (0..n)
                .map(|i| (0..n).map(|j| inst.d(i, j)).collect())
                .collect();
            MetricInstance::from_matrix(inst.roles().to_vec(), d, 1.0).unwrap()
        };
        use crate::metric::MetricInstance;

        let no_dominator = rebuild_alpha_one(&cycle(5));
        let c = crate::mcc::best_single_ball(&no_dominator, &no_dominator.clients()).unwrap();
        assert_eq!(c.cost(), 3.0);

        let dominated = rebuild_alpha_one(&star(4));
        let c = crate::mcc::best_single_ball(&dominated, &dominated.clients()).unwrap();
        assert_eq!(c.cost(), 1.0);
    }
}
