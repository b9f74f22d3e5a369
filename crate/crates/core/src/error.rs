use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("triangle inequality violated by points {0}, {1}, {2}: d({0},{2}) > d({0},{1}) + d({1},{2})")]
    TriangleViolation(usize, usize, usize),
    #[error("distance matrix is not symmetric at ({0}, {1})")]
    AsymmetricMatrix(usize, usize),
    #[error("graph is disconnected: no path between {0} and {1}")]
    DisconnectedGraph(usize, usize),
    #[error("negative distance at ({0}, {1})")]
    NegativeDistance(usize, usize),
    #[error("nonzero self-distance at point {0}")]
    NonzeroDiagonal(usize),
    #[error("alpha must be >= 1, got {0}")]
    InvalidAlpha(f64),
    #[error("invalid point set: {0}")]
    InvalidPoints(String),
    #[error("subset is empty")]
    EmptySubset,
    #[error("instance has no servers")]
    NoServers,
    #[error("instance has no clients")]
    NoClients,
    #[error("delta must be positive, got {0}")]
    InvalidDelta(f64),
    #[error("k must be at least 2, got {0}")]
    InvalidK(usize),
    #[error("input point set is empty")]
    EmptyInput,
    #[error("partition parameter n must be at least |P| = {0}, got {1}")]
    BadPartitionParam(usize, usize),
    #[error("probe radius {r} exceeds the lemma regime bound {bound}")]
    OutOfRegime { r: f64, bound: f64 },
    #[error("instance too large for exact solver: {0} points (limit {1})")]
    TooLarge(usize, usize),
    #[error("no feasible cover within the ball budget")]
    Infeasible,
    #[error("budget table is missing entry (block {0}, budget {1})")]
    MissingEntry(usize, usize),
    #[error("solver precondition failed: {0}")]
    Precondition(String),
    #[error("reduction verification mismatch: domination number {domination} but mcc optimum {mcc_cost}")]
    Mismatch { domination: usize, mcc_cost: f64 },
    #[error("usage error: {0}")]
    UsageError(String),
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
