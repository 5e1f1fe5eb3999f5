//! Training: rank labels, Huber objective, backpropagation, Adadelta updates.
//!
//! Everything is seeded and single-threaded, so a (keys, config) pair always
//! produces bit-identical weights.

use super::mlp::{
    centered, MlpModel, Trace, B1_OFF, B2_OFF, B3_OFF, B4_OFF, H1, H2, H3, PARAM_COUNT, W1_OFF,
    W2_OFF, W3_OFF, W4_OFF,
};
use crate::rng::SplitMix64;
use crate::types::{normalize_unchecked, Key};
use thiserror::Error;

/// Huber loss: quadratic within `delta` of the label, linear outside.
pub fn huber_loss(pred: f64, label: f64, delta: f64) -> f64 {
    assert!(delta > 0.0, "delta must be positive");
    let err = pred - label;
    if err.abs() <= delta {
        0.5 * err * err
    } else {
        delta * err.abs() - 0.5 * delta * delta
    }
}

/// d huber_loss / d pred. Magnitude never exceeds `delta`.
pub fn huber_grad(pred: f64, label: f64, delta: f64) -> f64 {
    assert!(delta > 0.0, "delta must be positive");
    let err = pred - label;
    if err.abs() <= delta {
        err
    } else {
        delta * err.signum()
    }
}

#[derive(Debug, Clone)]
pub struct TrainConfig {
    /// Huber threshold.
    pub delta: f64,
    pub epochs: usize,
    pub batch_size: usize,
    /// Adadelta decay.
    pub rho: f64,
    /// Adadelta stabilizer.
    pub eps_opt: f64,
    pub rng_seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            delta: 1.0,
            epochs: 500,
            batch_size: 256,
            rho: 0.95,
            eps_opt: 1e-6,
            rng_seed: 0,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum TrainError {
    #[error("training set is empty")]
    EmptyTrainingSet,
    #[error("training requires at least 2 distinct key values")]
    DegenerateKeys,
    #[error("delta must be positive, got {0}")]
    BadDelta(f64),
    #[error("epochs must be >= 1")]
    BadEpochs,
    #[error("batch size must be in 1..={max}, got {got}")]
    BadBatchSize { got: usize, max: usize },
    #[error("rho must lie in (0, 1), got {0}")]
    BadRho(f64),
    #[error("eps_opt must be positive, got {0}")]
    BadEpsOpt(f64),
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub model: MlpModel,
    /// Mean Huber loss per epoch, in epoch order.
    pub epoch_losses: Vec<f64>,
    /// Wall-clock seconds elapsed since training began, sampled at the end
    /// of each epoch (restarts included).
    pub epoch_elapsed_seconds: Vec<f64>,
}

/// Trains the position network on a key set. Labels are the keys' normalized
/// ranks in the sorted training sequence (first-occurrence rank for
/// duplicates, scaled by 1/(N-1)).
///
/// An unlucky draw can start the narrow rectifier stack with every path dead
/// (the output is a constant and no gradient reaches the hidden layers).
/// That state is detected during the early epochs and training restarts from
/// a reseeded initialization, so the result stays a pure function of
/// `(keys, cfg)`.
pub fn train(keys: &[Key], cfg: &TrainConfig) -> Result<TrainOutcome, TrainError> {
    if keys.is_empty() {
        return Err(TrainError::EmptyTrainingSet);
    }
    if !(cfg.delta > 0.0) {
        return Err(TrainError::BadDelta(cfg.delta));
    }
    if cfg.epochs == 0 {
        return Err(TrainError::BadEpochs);
    }
    if cfg.batch_size == 0 || cfg.batch_size > keys.len() {
        return Err(TrainError::BadBatchSize { got: cfg.batch_size, max: keys.len() });
    }
    if !(cfg.rho > 0.0 && cfg.rho < 1.0) {
        return Err(TrainError::BadRho(cfg.rho));
    }
    if !(cfg.eps_opt > 0.0) {
        return Err(TrainError::BadEpsOpt(cfg.eps_opt));
    }

    let mut sorted = keys.to_vec();
    sorted.sort_unstable();
    let lo = sorted[0].value();
    let hi = sorted[sorted.len() - 1].value();
    if !(lo < hi) {
        return Err(TrainError::DegenerateKeys);
    }

    // (normalized key, normalized rank label)
    let denom = (keys.len() - 1) as f64;
    let samples: Vec<(f64, f64)> = keys
        .iter()
        .map(|k| {
            let rank = sorted.partition_point(|s| *s < *k);
            (normalize_unchecked(k.value(), lo, hi), rank as f64 / denom)
        })
        .collect();

    const MAX_ATTEMPTS: usize = 5;
    let started = std::time::Instant::now();
    let mut seed = cfg.rng_seed;
    let mut outcome = None;
    for attempt in 0..MAX_ATTEMPTS {
        match train_attempt(&samples, cfg, seed, lo, hi, started) {
            Attempt::Healthy(result) => {
                outcome = Some(result);
                break;
            }
            Attempt::Dead(result) => {
                if attempt == MAX_ATTEMPTS - 1 {
                    outcome = Some(result);
                }
                seed = seed.wrapping_add(0xA5A5_5A5A_0F0F_F0F0).wrapping_mul(attempt as u64 + 3);
            }
        }
    }
    Ok(outcome.expect("training loop always yields an outcome"))
}

enum Attempt {
    Healthy(TrainOutcome),
    Dead(TrainOutcome),
}

// Epochs after which a flat network aborts the attempt. Death is an
// early-dynamics phenomenon; past this point the fit is moving.
const DEATH_CHECK_EPOCHS: usize = 8;

fn train_attempt(
    samples: &[(f64, f64)],
    cfg: &TrainConfig,
    seed: u64,
    lo: f64,
    hi: f64,
    started: std::time::Instant,
) -> Attempt {
    let mut rng = SplitMix64::new(seed);
    let mut model = init_model(&mut rng, lo, hi);

    let mut grad_sq_avg = vec![0.0; PARAM_COUNT];
    let mut update_sq_avg = vec![0.0; PARAM_COUNT];
    let mut grads = vec![0.0; PARAM_COUNT];
    let mut order: Vec<usize> = (0..samples.len()).collect();
    let mut epoch_losses = Vec::with_capacity(cfg.epochs);
    let mut epoch_elapsed_seconds = Vec::with_capacity(cfg.epochs);

    for epoch in 0..cfg.epochs {
        rng.shuffle(&mut order);
        let mut epoch_loss = 0.0;
        for batch in order.chunks(cfg.batch_size) {
            grads.iter_mut().for_each(|g| *g = 0.0);
            let scale = 1.0 / batch.len() as f64;
            for &idx in batch {
                let (x, label) = samples[idx];
                let (pred, trace) = model.traced_output(x);
                epoch_loss += huber_loss(pred, label, cfg.delta);
                let dy = huber_grad(pred, label, cfg.delta) * scale;
                accumulate_gradients(&model, x, &trace, dy, &mut grads);
            }
            for i in 0..PARAM_COUNT {
                let g = grads[i];
                grad_sq_avg[i] = cfg.rho * grad_sq_avg[i] + (1.0 - cfg.rho) * g * g;
                let step = -((update_sq_avg[i] + cfg.eps_opt).sqrt()
                    / (grad_sq_avg[i] + cfg.eps_opt).sqrt())
                    * g;
                update_sq_avg[i] = cfg.rho * update_sq_avg[i] + (1.0 - cfg.rho) * step * step;
                model.params[i] += step;
            }
        }
        epoch_losses.push(epoch_loss / samples.len() as f64);
        epoch_elapsed_seconds.push(started.elapsed().as_secs_f64());
        let last_epoch = epoch + 1 == cfg.epochs;
        if (epoch < DEATH_CHECK_EPOCHS || last_epoch) && is_flat(&model) {
            return Attempt::Dead(TrainOutcome { model, epoch_losses, epoch_elapsed_seconds });
        }
    }
    Attempt::Healthy(TrainOutcome { model, epoch_losses, epoch_elapsed_seconds })
}

// A live network varies over the input range; a dead one is bitwise constant.
fn is_flat(model: &MlpModel) -> bool {
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for i in 0..=32 {
        let y = model.raw_output(i as f64 / 32.0);
        min = min.min(y);
        max = max.max(y);
    }
    max - min < 1e-12
}

/// Mean Huber loss of the network over `(normalized input, label)` samples.
pub fn batch_loss(model: &MlpModel, samples: &[(f64, f64)], delta: f64) -> f64 {
    let total: f64 = samples
        .iter()
        .map(|&(x, label)| huber_loss(model.raw_output(x), label, delta))
        .sum();
    total / samples.len() as f64
}

/// Analytic gradient of `batch_loss` with respect to every parameter, in the
/// flat parameter order.
pub fn batch_gradients(model: &MlpModel, samples: &[(f64, f64)], delta: f64) -> Vec<f64> {
    let mut grads = vec![0.0; PARAM_COUNT];
    let scale = 1.0 / samples.len() as f64;
    for &(x, label) in samples {
        let (pred, trace) = model.traced_output(x);
        let dy = huber_grad(pred, label, delta) * scale;
        accumulate_gradients(model, x, &trace, dy, &mut grads);
    }
    grads
}

// Glorot-uniform weights drawn in flat layout order. Hidden biases start at
// a small positive value so no rectifier path is dead at initialization (the
// 8- and 4-unit layers are narrow enough for that to happen otherwise).
fn init_model(rng: &mut SplitMix64, lo: f64, hi: f64) -> MlpModel {
    let mut params = vec![0.0; PARAM_COUNT];
    let mut fill = |range: std::ops::Range<usize>, fan_in: usize, fan_out: usize, r: &mut SplitMix64| {
        let limit = (6.0 / (fan_in + fan_out) as f64).sqrt();
        for i in range {
            params[i] = (r.next_f64() * 2.0 - 1.0) * limit;
        }
    };
    fill(W1_OFF..W1_OFF + H1, 1, H1, rng);
    fill(W2_OFF..W2_OFF + H2 * H1, H1, H2, rng);
    fill(W3_OFF..W3_OFF + H3 * H2, H2, H3, rng);
    fill(W4_OFF..W4_OFF + H3, H3, 1, rng);
    for i in B1_OFF..B1_OFF + H1 {
        params[i] = 0.1;
    }
    for i in B2_OFF..B2_OFF + H2 {
        params[i] = 0.1;
    }
    for i in B3_OFF..B3_OFF + H3 {
        params[i] = 0.1;
    }
    MlpModel::from_params(params, lo, hi).expect("finite bounds checked by caller")
}

// One backpropagation pass; adds dL/dparam for a single sample into `grads`.
fn accumulate_gradients(model: &MlpModel, x: f64, trace: &Trace, dy: f64, grads: &mut [f64]) {
    let p = &model.params;

    let mut dz3 = [0.0; H3];
    for c in 0..H3 {
        grads[W4_OFF + c] += dy * trace.a3[c];
        if trace.a3[c] > 0.0 {
            dz3[c] = dy * p[W4_OFF + c];
        }
    }
    grads[B4_OFF] += dy;

    let mut dz2 = [0.0; H2];
    for r in 0..H3 {
        let row = W3_OFF + r * H2;
        grads[B3_OFF + r] += dz3[r];
        for c in 0..H2 {
            grads[row + c] += dz3[r] * trace.a2[c];
            dz2[c] += dz3[r] * p[row + c];
        }
    }
    for c in 0..H2 {
        if trace.a2[c] <= 0.0 {
            dz2[c] = 0.0;
        }
    }

    let mut dz1 = [0.0; H1];
    for r in 0..H2 {
        let row = W2_OFF + r * H1;
        grads[B2_OFF + r] += dz2[r];
        for c in 0..H1 {
            grads[row + c] += dz2[r] * trace.a1[c];
            dz1[c] += dz2[r] * p[row + c];
        }
    }
    for c in 0..H1 {
        if trace.a1[c] <= 0.0 {
            dz1[c] = 0.0;
        }
    }

    let cx = centered(x);
    for j in 0..H1 {
        grads[W1_OFF + j] += dz1[j] * cx;
        grads[B1_OFF + j] += dz1[j];
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::validate_keys;

    #[test]
    fn huber_loss_examples() {
        assert_eq!(huber_loss(1.0, 1.0, 1.0), 0.0);
        assert_eq!(huber_loss(1.5, 1.0, 1.0), 0.125);
        assert_eq!(huber_loss(3.0, 1.0, 1.0), 1.5);
    }

    #[test]
    fn huber_grad_examples() {
        assert_eq!(huber_grad(1.0, 1.0, 1.0), 0.0);
        assert_eq!(huber_grad(1.5, 1.0, 1.0), 0.5);
        assert_eq!(huber_grad(3.0, 1.0, 1.0), 1.0);
        assert_eq!(huber_grad(-3.0, 1.0, 1.0), -1.0);
    }

    #[test]
    fn huber_is_continuous_at_the_threshold() {
        let (label, delta, eta) = (0.3, 0.7, 1e-9);
        for side in [label + delta, label - delta] {
            let jump = (huber_loss(side + eta, label, delta)
                - huber_loss(side - eta, label, delta))
            .abs();
            assert!(jump < 1e-8, "discontinuity {jump} at {side}");
        }
    }

    #[test]
    fn train_rejects_degenerate_input() {
        let cfg = TrainConfig { epochs: 1, batch_size: 1, ..Default::default() };
        assert_eq!(train(&[], &cfg).unwrap_err(), TrainError::EmptyTrainingSet);
        let same = validate_keys(&[2.0, 2.0, 2.0]).unwrap();
        assert_eq!(train(&same, &cfg).unwrap_err(), TrainError::DegenerateKeys);
    }

    #[test]
    fn train_rejects_bad_config() {
        let keys = validate_keys(&[1.0, 2.0, 3.0]).unwrap();
        let base = TrainConfig { epochs: 1, batch_size: 2, ..Default::default() };
        assert!(train(&keys, &TrainConfig { delta: 0.0, ..base.clone() }).is_err());
        assert!(train(&keys, &TrainConfig { epochs: 0, ..base.clone() }).is_err());
        assert!(train(&keys, &TrainConfig { batch_size: 4, ..base.clone() }).is_err());
        assert!(train(&keys, &TrainConfig { batch_size: 0, ..base }).is_err());
    }

    #[test]
    fn training_is_deterministic() {
        let raw: Vec<f64> = (0..300).map(|i| ((i * 37) % 101) as f64).collect();
        let keys = validate_keys(&raw).unwrap();
        let cfg = TrainConfig { epochs: 5, batch_size: 32, rng_seed: 11, ..Default::default() };
        let a = train(&keys, &cfg).unwrap();
        let b = train(&keys, &cfg).unwrap();
        for (x, y) in a.model.params().iter().zip(b.model.params()) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
        assert_eq!(a.epoch_losses, b.epoch_losses);
    }

    #[test]
    fn loss_decreases_on_a_small_set() {
        let raw: Vec<f64> = (0..512).map(|i| (i as f64).sin() * 50.0 + (i as f64)).collect();
        let keys = validate_keys(&raw).unwrap();
        let cfg = TrainConfig { epochs: 40, batch_size: 64, rng_seed: 3, ..Default::default() };
        let out = train(&keys, &cfg).unwrap();
        let first = out.epoch_losses[0];
        let last = *out.epoch_losses.last().unwrap();
        assert!(last < first, "loss did not improve: {first} -> {last}");
    }
}
