//! Point sets, metrics, balls, covers, and the candidate ball set that every
//! solver draws from.

use crate::error::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Additive tolerance for metric validation. Graph shortest paths and
/// Euclidean norms are computed in floating point, so the triangle
/// inequality is only required up to this slack.
pub const METRIC_TOLERANCE: f64 = 1e-9;

pub type PointId = usize;

/// Role of a point: covered (client), eligible ball center (server), or both.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Client,
    Server,
    Both,
}

impl Role {
    pub fn is_client(self) -> bool {
        matches!(self, Role::Client | Role::Both)
    }

    pub fn is_server(self) -> bool {
        matches!(self, Role::Server | Role::Both)
    }
}

/// A finite metric space with client/server roles and a cost exponent.
///
/// Distances are stored as a dense symmetric matrix and validated on
/// construction: zero diagonal, symmetry, non-negativity, and the triangle
/// inequality within [`METRIC_TOLERANCE`]. Instances are immutable after
/// construction and safe to share across threads.
#[derive(Debug, Clone)]
pub struct MetricInstance {
    roles: Vec<Role>,
    dist: Vec<f64>,
    n: usize,
    alpha: f64,
}

impl MetricInstance {
    /// Builds an instance from an explicit distance matrix.
    pub fn from_matrix(roles: Vec<Role>, matrix: Vec<Vec<f64>>, alpha: f64) -> Result<Self> {
        let n = roles.len();
        if matrix.len() != n || matrix.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidPoints(format!(
                "matrix must be {n}x{n} to match the point list"
            )));
        }
        let mut dist = vec![0.0; n * n];
        for (i, row) in matrix.iter().enumerate() {
            for (j, &d) in row.iter().enumerate() {
                dist[i * n + j] = d;
            }
        }
        let inst = MetricInstance {
            roles,
            dist,
            n,
            alpha,
        };
        inst.validate()?;
        Ok(inst)
    }

    /// Builds an instance from Euclidean coordinates.
    pub fn from_euclidean(roles: Vec<Role>, coords: &[Vec<f64>], alpha: f64) -> Result<Self> {
        let n = roles.len();
        if coords.len() != n {
            return Err(Error::InvalidPoints(format!(
                "expected {n} coordinate rows, got {}",
                coords.len()
            )));
        }
        if n > 0 {
            let dim = coords[0].len();
            if coords.iter().any(|c| c.len() != dim) {
                return Err(Error::InvalidPoints(
                    "inconsistent coordinate dimensions".into(),
                ));
            }
        }
        let mut dist = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = coords[i]
                    .iter()
                    .zip(&coords[j])
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
                dist[i * n + j] = d;
                dist[j * n + i] = d;
            }
        }
        let inst = MetricInstance {
            roles,
            dist,
            n,
            alpha,
        };
        inst.validate()?;
        Ok(inst)
    }

    /// Builds an instance from a weighted undirected graph via all-pairs
    /// shortest paths (Dijkstra from every source).
    pub fn from_graph(roles: Vec<Role>, edges: &[(usize, usize, f64)], alpha: f64) -> Result<Self> {
        let n = roles.len();
        let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for &(u, v, w) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) references a point outside 0..{n}"
                )));
            }
            if w < 0.0 {
                return Err(Error::NegativeDistance(u, v));
            }
            adj[u].push((v, w));
            adj[v].push((u, w));
        }
        let mut dist = vec![f64::INFINITY; n * n];
        for src in 0..n {
            let row = dijkstra(&adj, src);
            for (j, &d) in row.iter().enumerate() {
                if d.is_infinite() {
                    return Err(Error::DisconnectedGraph(src, j));
                }
                dist[src * n + j] = d;
            }
        }
        let inst = MetricInstance {
            roles,
            dist,
            n,
            alpha,
        };
        inst.validate()?;
        Ok(inst)
    }

    fn validate(&self) -> Result<()> {
        if self.alpha < 1.0 {
            return Err(Error::InvalidAlpha(self.alpha));
        }
        if self.n == 0 {
            return Err(Error::InvalidPoints(
                "instance needs at least one point".into(),
            ));
        }
        if !self.roles.iter().any(|r| r.is_client()) {
            return Err(Error::NoClients);
        }
        let n = self.n;
        for i in 0..n {
            if self.d(i, i) != 0.0 {
                return Err(Error::NonzeroDiagonal(i));
            }
            for j in 0..n {
                let d = self.d(i, j);
                if d < 0.0 || !d.is_finite() {
                    return Err(Error::NegativeDistance(i, j));
                }
                if (d - self.d(j, i)).abs() > METRIC_TOLERANCE {
                    return Err(Error::AsymmetricMatrix(i, j));
                }
            }
        }
        // Triangle inequality, checked over all ordered triples.
        let violation = (0..n).into_par_iter().find_map_any(|i| {
            for k in 0..n {
                let dik = self.d(i, k);
                for j in 0..n {
                    if self.d(i, j) > dik + self.d(k, j) + METRIC_TOLERANCE {
                        return Some((i, k, j));
                    }
                }
            }
            None
        });
        if let Some((i, k, j)) = violation {
            return Err(Error::TriangleViolation(i, k, j));
        }
        Ok(())
    }

    #[inline]
    pub fn d(&self, i: PointId, j: PointId) -> f64 {
        self.dist[i * self.n + j]
    }

    pub fn num_points(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn role(&self, i: PointId) -> Role {
        self.roles[i]
    }

    pub fn roles(&self) -> &[Role] {
        &self.roles
    }

    /// Client point ids, ascending.
    pub fn clients(&self) -> Vec<PointId> {
        (0..self.n).filter(|&i| self.roles[i].is_client()).collect()
    }

    /// Server point ids, ascending.
    pub fn servers(&self) -> Vec<PointId> {
        (0..self.n).filter(|&i| self.roles[i].is_server()).collect()
    }

    /// All point ids, ascending.
    pub fn all_points(&self) -> Vec<PointId> {
        (0..self.n).collect()
    }

    /// Maximum interpoint distance over `subset`; 0 for a singleton.
    pub fn diam(&self, subset: &[PointId]) -> Result<f64> {
        if subset.is_empty() {
            return Err(Error::EmptySubset);
        }
        let mut best = 0.0f64;
        for (a, &p) in subset.iter().enumerate() {
            for &q in &subset[a + 1..] {
                best = best.max(self.d(p, q));
            }
        }
        Ok(best)
    }

    /// Members of `subset` inside the closed ball, with exact `<=` on stored
    /// distances.
    pub fn ball_members(&self, ball: &Ball, subset: &[PointId]) -> Vec<PointId> {
        subset
            .iter()
            .copied()
            .filter(|&p| self.d(ball.center, p) <= ball.radius)
            .collect()
    }

    /// Copy of the instance with every distance multiplied by `scale`.
    pub fn scaled(&self, scale: f64) -> Result<Self> {
        let inst = MetricInstance {
            roles: self.roles.clone(),
            dist: self.dist.iter().map(|d| d * scale).collect(),
            n: self.n,
            alpha: self.alpha,
        };
        inst.validate()?;
        Ok(inst)
    }

    /// Minimum positive distance between distinct clients, if any pair exists.
    pub fn min_client_distance(&self) -> Option<f64> {
        let clients = self.clients();
        let mut best: Option<f64> = None;
        for (a, &p) in clients.iter().enumerate() {
            for &q in &clients[a + 1..] {
                let d = self.d(p, q);
                best = Some(best.map_or(d, |b: f64| b.min(d)));
            }
        }
        best
    }
}

fn dijkstra(adj: &[Vec<(usize, f64)>], src: usize) -> Vec<f64> {
    use std::cmp::Reverse;
    use std::collections::BinaryHeap;

    // f64 keys are finite and non-negative here, so total ordering via bits
    // is safe.
    #[derive(PartialEq)]
    struct Key(f64);
    impl Eq for Key {}
    impl PartialOrd for Key {
        fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
            Some(self.cmp(other))
        }
    }
    impl Ord for Key {
        fn cmp(&self, other: &Self) -> std::cmp::Ordering {
            self.0.total_cmp(&other.0)
        }
    }

    let n = adj.len();
    let mut dist = vec![f64::INFINITY; n];
    dist[src] = 0.0;
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((Key(0.0), src)));
    while let Some(Reverse((Key(d), u))) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &(v, w) in &adj[u] {
            let nd = d + w;
            if nd < dist[v] {
                dist[v] = nd;
                heap.push(Reverse((Key(nd), v)));
            }
        }
    }
    dist
}

/// A closed ball: center point id and non-negative radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: PointId,
    pub radius: f64,
}

impl Ball {
    pub fn new(center: PointId, radius: f64) -> Self {
        debug_assert!(radius >= 0.0);
        Ball { center, radius }
    }

    pub fn cost(&self, alpha: f64) -> f64 {
        self.radius.powf(alpha)
    }

    fn key(&self) -> (PointId, u64) {
        (self.center, self.radius.to_bits())
    }
}

/// Total cost of a set of balls: sum of radius^alpha over the sorted list,
/// so the result does not depend on merge order.
pub fn cover_cost(balls: &[Ball], alpha: f64) -> f64 {
    balls.iter().map(|b| b.cost(alpha)).sum()
}

/// A multiset of balls with cached cost.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cover {
    balls: Vec<Ball>,
    cost: f64,
}

impl Cover {
    /// Builds a cover; balls are sorted by (center, radius) and the cost is
    /// computed from the sorted order.
    pub fn new(mut balls: Vec<Ball>, alpha: f64) -> Self {
        balls.sort_by_key(Ball::key);
        let cost = cover_cost(&balls, alpha);
        Cover { balls, cost }
    }

    pub fn empty() -> Self {
        Cover {
            balls: Vec::new(),
            cost: 0.0,
        }
    }

    pub fn balls(&self) -> &[Ball] {
        &self.balls
    }

    pub fn cost(&self) -> f64 {
        self.cost
    }

    pub fn ball_count(&self) -> usize {
        self.balls.len()
    }

    /// Multiset union; duplicates are kept.
    pub fn union(&self, other: &Cover, alpha: f64) -> Cover {
        let mut balls = self.balls.clone();
        balls.extend_from_slice(&other.balls);
        Cover::new(balls, alpha)
    }

    /// Deterministic comparison: cost, then ball count, then the
    /// lexicographic ball list.
    pub fn cmp_quality(&self, other: &Cover) -> std::cmp::Ordering {
        self.cost
            .total_cmp(&other.cost)
            .then_with(|| self.balls.len().cmp(&other.balls.len()))
            .then_with(|| {
                for (a, b) in self.balls.iter().zip(&other.balls) {
                    let ord = a.key().cmp(&b.key());
                    if ord != std::cmp::Ordering::Equal {
                        return ord;
                    }
                }
                std::cmp::Ordering::Equal
            })
    }
}

/// True iff every point of `subset` lies inside some ball of `cover`.
pub fn is_cover(inst: &MetricInstance, cover: &Cover, subset: &[PointId]) -> bool {
    subset.iter().all(|&p| {
        cover
            .balls()
            .iter()
            .any(|b| inst.d(b.center, p) <= b.radius)
    })
}

/// Which problem's candidate balls to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BallMode {
    /// Centers are servers, radii are distances to clients.
    Mcc,
    /// Centers are clients, radii are distances to clients.
    Kcluster,
}

/// The deduplicated set of balls (center, d(client, center)) that optimal
/// solutions draw from, sorted by (center, radius).
#[derive(Debug, Clone)]
pub struct CandidateBallSet {
    balls: Vec<Ball>,
    center_ranges: Vec<(PointId, std::ops::Range<usize>)>,
}

impl CandidateBallSet {
    pub fn balls(&self) -> &[Ball] {
        &self.balls
    }

    pub fn len(&self) -> usize {
        self.balls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.balls.is_empty()
    }

    /// Balls centered at `center`, sorted by radius.
    pub fn for_center(&self, center: PointId) -> &[Ball] {
        self.center_ranges
            .iter()
            .find(|(c, _)| *c == center)
            .map(|(_, r)| &self.balls[r.clone()])
            .unwrap_or(&[])
    }

    pub fn contains(&self, ball: &Ball) -> bool {
        self.balls
            .binary_search_by_key(&ball.key(), Ball::key)
            .is_ok()
    }
}

/// Builds the candidate ball set for the given problem mode.
pub fn candidate_balls(inst: &MetricInstance, mode: BallMode) -> Result<CandidateBallSet> {
    let clients = inst.clients();
    let centers = match mode {
        BallMode::Mcc => {
            let servers = inst.servers();
            if servers.is_empty() {
                return Err(Error::NoServers);
            }
            servers
        }
        BallMode::Kcluster => {
            if clients.is_empty() {
                return Err(Error::NoClients);
            }
            clients.clone()
        }
    };
    let mut balls = Vec::with_capacity(centers.len() * clients.len());
    for &c in &centers {
        for &x in &clients {
            balls.push(Ball::new(c, inst.d(c, x)));
        }
    }
    balls.sort_by_key(Ball::key);
    balls.dedup_by_key(|b| b.key());
    let mut center_ranges = Vec::with_capacity(centers.len());
    let mut start = 0;
    while start < balls.len() {
        let c = balls[start].center;
        let end = balls[start..].iter().take_while(|b| b.center == c).count() + start;
        center_ranges.push((c, start..end));
        start = end;
    }
    Ok(CandidateBallSet {
        balls,
        center_ranges,
    })
}
