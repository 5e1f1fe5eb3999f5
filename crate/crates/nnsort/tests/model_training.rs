//! Training-quality checks: backprop against finite differences, convergence
//! on a large key set, determinism, and the trained model's agreement with
//! the empirical CDF.

use nnsort::datagen::{generate, Distribution};
use nnsort::model::{batch_gradients, batch_loss, train, MlpModel, TrainConfig, PARAM_COUNT};
use nnsort::rng::SplitMix64;
use nnsort::types::{Key, OpCounters};
use nnsort::Predictor;

fn random_model(seed: u64) -> MlpModel {
    let mut rng = SplitMix64::new(seed);
    let params: Vec<f64> = (0..PARAM_COUNT).map(|_| rng.next_f64() * 2.0 - 1.0).collect();
    MlpModel::from_params(params, 0.0, 1.0).unwrap()
}

fn random_batch(seed: u64, len: usize) -> Vec<(f64, f64)> {
    let mut rng = SplitMix64::new(seed);
    (0..len).map(|_| (rng.next_f64(), rng.next_f64())).collect()
}

/// Central finite differences against analytic backprop on every parameter.
fn gradient_check(model: &MlpModel, samples: &[(f64, f64)], delta: f64) {
    const STEP: f64 = 1e-6;
    const REL_TOL: f64 = 1e-4;
    let analytic = batch_gradients(model, samples, delta);
    let mut probe = model.clone();
    for i in 0..PARAM_COUNT {
        let original = probe.param(i);
        probe.set_param(i, original + STEP);
        let plus = batch_loss(&probe, samples, delta);
        probe.set_param(i, original - STEP);
        let minus = batch_loss(&probe, samples, delta);
        probe.set_param(i, original);
        let numeric = (plus - minus) / (2.0 * STEP);
        let denom = analytic[i].abs().max(numeric.abs()).max(1e-6);
        let rel = (analytic[i] - numeric).abs() / denom;
        assert!(
            rel <= REL_TOL,
            "param {i}: analytic {} vs numeric {} (rel {rel:.2e})",
            analytic[i],
            numeric
        );
    }
}

#[test]
fn backprop_matches_finite_differences() {
    for seed in 0..3u64 {
        let model = random_model(seed * 31 + 1);
        let batch = random_batch(seed + 100, 16);
        gradient_check(&model, &batch, 1.0);
    }
    // Exercise the linear branch of the objective too.
    let model = random_model(77);
    let batch = random_batch(78, 16);
    gradient_check(&model, &batch, 0.05);
}

#[test]
fn converges_on_uniform_keys() {
    let keys = generate(Distribution::uniform01(), 100_000, 42).unwrap();
    let cfg = TrainConfig { epochs: 25, batch_size: 256, rng_seed: 9, ..Default::default() };
    let out = train(&keys, &cfg).unwrap();
    let first = out.epoch_losses[0];
    let last = *out.epoch_losses.last().unwrap();
    assert!(
        last <= 0.1 * first,
        "expected a 10x loss drop, got {first} -> {last}"
    );
}

#[test]
fn trained_median_tracks_the_empirical_cdf() {
    let keys = generate(Distribution::uniform01(), 100_000, 7).unwrap();
    let cfg = TrainConfig { epochs: 25, batch_size: 256, rng_seed: 3, ..Default::default() };
    let model = train(&keys, &cfg).unwrap().model;

    let mut sorted = keys.clone();
    sorted.sort();
    let median = sorted[sorted.len() / 2];

    // Brute-force empirical CDF: fraction of keys strictly below the median.
    let below = keys.iter().filter(|k| **k < median).count();
    let ecdf = below as f64 / (keys.len() - 1) as f64;

    let mut counters = OpCounters::default();
    let predicted = model.forward(median, &mut counters);
    assert!(
        (0.45..=0.55).contains(&predicted),
        "median prediction {predicted} strayed from the middle"
    );
    assert!(
        (predicted - ecdf).abs() <= 0.05,
        "prediction {predicted} vs empirical cdf {ecdf}"
    );
}

#[test]
fn identical_seeds_train_identical_models() {
    let keys = generate(Distribution::standard_lognormal(), 20_000, 5).unwrap();
    let cfg = TrainConfig { epochs: 4, batch_size: 128, rng_seed: 21, ..Default::default() };
    let a = train(&keys, &cfg).unwrap();
    let b = train(&keys, &cfg).unwrap();
    assert!(a
        .model
        .params()
        .iter()
        .zip(b.model.params())
        .all(|(x, y)| x.to_bits() == y.to_bits()));

    let different = TrainConfig { rng_seed: 22, ..cfg };
    let c = train(&keys, &different).unwrap();
    assert!(a
        .model
        .params()
        .iter()
        .zip(c.model.params())
        .any(|(x, y)| x.to_bits() != y.to_bits()));
}

#[test]
fn forward_is_pure_apart_from_the_counter() {
    let keys = generate(Distribution::uniform01(), 5_000, 11).unwrap();
    let cfg = TrainConfig { epochs: 3, batch_size: 64, rng_seed: 2, ..Default::default() };
    let model = train(&keys, &cfg).unwrap().model;
    let probe = Key::new(0.37).unwrap();
    let mut counters = OpCounters::default();
    let first = model.forward(probe, &mut counters);
    for _ in 0..10 {
        assert_eq!(model.forward(probe, &mut counters), first);
    }
    assert_eq!(counters.model_invocations, 11);
    assert!((0.0..=1.0).contains(&first));
}
