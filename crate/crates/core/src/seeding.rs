//! Seed derivation for reproducible randomized runs.
//!
//! All randomness in a solver run flows from a single top-level seed. Child
//! seeds are derived from (run seed, subset content), so the value computed
//! for a subset does not depend on the path that reached it. This keeps
//! memoized results and parallel schedules bit-reproducible.

const FNV_OFFSET: u64 = 0xcbf29ce484222325;
const FNV_PRIME: u64 = 0x100000001b3;

/// FNV-1a over raw bytes.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h = FNV_OFFSET;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(FNV_PRIME);
    }
    h
}

/// Content hash of a sorted point-id subset.
pub fn subset_hash(subset: &[usize]) -> u64 {
    let mut h = FNV_OFFSET;
    for &p in subset {
        for b in (p as u64).to_le_bytes() {
            h ^= u64::from(b);
            h = h.wrapping_mul(FNV_PRIME);
        }
    }
    h
}

/// SplitMix64 finalizer; mixes a seed with a stream label.
pub fn mix64(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_mul(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Mixes several labels into one derived seed.
pub fn mix_many(seed: u64, streams: &[u64]) -> u64 {
    streams.iter().fold(seed, |acc, &s| mix64(acc, s))
}
