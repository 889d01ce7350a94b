//! Seeded inputs shared by the benchmarks.

use lntest_core::{
    sample_scenario, NormalSampler, PairedSample, Permutation, ScenarioKind, ScenarioSpec,
};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const SIZES: [usize; 3] = [100, 1_000, 10_000];

/// Uniform random permutation of `1..=n`.
pub fn random_permutation(n: usize, seed: u64) -> Permutation {
    let mut image: Vec<u32> = (1..=n as u32).collect();
    image.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    Permutation::new(image).expect("shuffle of 1..=n")
}

/// Correlated normal sample.
pub fn normal_sample(n: usize, rho: f64, seed: u64) -> PairedSample {
    let spec = ScenarioSpec {
        kind: ScenarioKind::BivariateNormal { rho },
        n,
    };
    sample_scenario(
        &spec,
        &mut NormalSampler::new(ChaCha8Rng::seed_from_u64(seed)),
    )
    .expect("valid scenario")
}
