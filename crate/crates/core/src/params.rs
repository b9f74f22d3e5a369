//! Shared solver parameters: diameter levels, the aspect-ratio bound L, and
//! integer ceilings of analytic bounds.

/// Ceiling with a small tolerance so that values a few ulps above an integer
/// (from float division) do not bump to the next integer.
pub fn ceil_tol(x: f64) -> f64 {
    (x - 1e-9).ceil().max(0.0)
}

/// Smallest non-negative integer `i` with `diam < 2^i`.
///
/// Level 0 means a singleton or sub-unit diameter; under the min-distance-1
/// normalization that implies at most one point.
pub fn level(diam: f64) -> u32 {
    let mut i = 0u32;
    let mut pow = 1.0f64;
    while diam >= pow {
        i += 1;
        pow *= 2.0;
    }
    i
}

/// The recursion-depth bound `L = 1 + ceil(log2 diam(X))`, at least 1.
pub fn aspect_level(diam_clients: f64) -> u32 {
    if diam_clients <= 1.0 {
        1
    } else {
        1 + ceil_tol(diam_clients.log2()) as u32
    }
}

/// Saturation limit for enumeration bounds; anything larger is capped with a
/// warning since it can never bind in practice.
pub const BOUND_SATURATION: usize = 1 << 40;

/// `ceil((9 * alpha * gamma / lambda)^alpha)`: the cap on the number of
/// large balls an optimal cover can contain. Returns the bound and whether
/// saturation was applied.
pub fn structure_bound_mcc(alpha: f64, lambda: f64, gamma: f64) -> (usize, bool) {
    saturating_bound((9.0 * alpha * gamma / lambda).powf(alpha))
}

/// `ceil(gamma^alpha)`: the large-ball cap for budgeted clustering.
pub fn structure_bound_kcluster(alpha: f64, gamma: f64) -> (usize, bool) {
    saturating_bound(gamma.powf(alpha))
}

fn saturating_bound(raw: f64) -> (usize, bool) {
    let c = ceil_tol(raw);
    if !c.is_finite() || c >= BOUND_SATURATION as f64 {
        (BOUND_SATURATION, true)
    } else {
        (c as usize, false)
    }
}
