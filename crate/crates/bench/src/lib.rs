//! Shared fixtures for the benchmark targets.

use ballcover_core::harness::{generate, GeneratedInstance, Generator, InstanceSpec};

/// A normalized random metric with `n` clients and `m` servers.
pub fn random_metric(n: usize, m: usize, seed: u64) -> GeneratedInstance {
    generate(&InstanceSpec {
        generator: Generator::RandomMetric { n, m },
        seed,
        alpha: 1.0,
        normalize: true,
    })
    .expect("generator produces a valid metric")
}

/// Uniform points in a square.
pub fn euclidean(n: usize, seed: u64) -> GeneratedInstance {
    generate(&InstanceSpec {
        generator: Generator::EuclideanUniform {
            n,
            m: 0,
            dim: 2,
            box_size: 10.0,
        },
        seed,
        alpha: 1.0,
        normalize: false,
    })
    .expect("generator produces a valid metric")
}
