//! Shared fixtures for the criterion benchmarks: seeded datasets and a
//! model trained once per distribution.

use nnsort::datagen::{generate, Distribution};
use nnsort::model::{train, MlpModel, TrainConfig};
use nnsort::types::Key;

pub const BENCH_SEED: u64 = 0xBE7C4;

pub fn dataset(dist: Distribution, n: usize) -> Vec<Key> {
    generate(dist, n, BENCH_SEED).expect("valid distribution")
}

/// Model fitted on a disjoint training draw from the same distribution.
pub fn fitted_model(dist: Distribution, train_n: usize) -> MlpModel {
    let training = generate(dist, train_n, BENCH_SEED ^ 0xFFFF).expect("valid distribution");
    let cfg = TrainConfig {
        epochs: 25,
        batch_size: 256,
        rng_seed: BENCH_SEED,
        ..Default::default()
    };
    train(&training, &cfg).expect("training failed").model
}

pub fn distributions() -> Vec<(&'static str, Distribution)> {
    vec![
        ("uniform", Distribution::uniform01()),
        ("normal", Distribution::standard_normal()),
        ("lognormal", Distribution::standard_lognormal()),
    ]
}
