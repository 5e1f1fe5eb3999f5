//! Position models: the trained regression network plus the synthetic
//! predictors (exact-rank oracle, constant, seeded-random) used to drive
//! best-case, worst-case, and adversarial behavior.

mod io;
mod mlp;
mod train;

pub use io::{load_model, save_model, ModelIoError};
pub use mlp::{MlpModel, PARAM_COUNT};
pub use train::{
    batch_gradients, batch_loss, huber_grad, huber_loss, train, TrainConfig, TrainError,
    TrainOutcome,
};

use crate::rng::hash_to_unit;
use crate::types::{Key, OpCounters};

/// A position model: estimates where a key lands in the sorted order,
/// as a fraction of the full range.
pub trait Predictor {
    /// Raw position estimate, before clamping.
    fn predict_raw(&self, key: Key) -> f64;

    /// Position in `[0, 1]`. Clamps the raw estimate and charges one model
    /// invocation to the counters.
    fn forward(&self, key: Key, counters: &mut OpCounters) -> f64 {
        counters.record_model_invocation();
        let y = self.predict_raw(key);
        if y.is_nan() {
            0.0
        } else {
            y.clamp(0.0, 1.0)
        }
    }
}

/// Exact empirical ranks over a held key set. Gives the best-case predictor:
/// distinct keys map to distinct, perfectly ordered positions.
#[derive(Debug, Clone)]
pub struct OracleRank {
    sorted: Vec<Key>,
}

impl OracleRank {
    pub fn new(mut keys: Vec<Key>) -> Self {
        keys.sort_unstable();
        Self { sorted: keys }
    }

    /// rank(x) / (N-1): duplicates share the rank of their first occurrence,
    /// unseen keys get the rank they would be inserted at.
    fn rank_fraction(&self, key: Key) -> f64 {
        let n = self.sorted.len();
        if n <= 1 {
            return 0.5;
        }
        let rank = self.sorted.partition_point(|k| *k < key);
        rank as f64 / (n - 1) as f64
    }
}

impl Predictor for OracleRank {
    fn predict_raw(&self, key: Key) -> f64 {
        self.rank_fraction(key)
    }
}

/// Fixed-output predictor: every key collides on one slot. Worst case.
#[derive(Debug, Clone, Copy)]
pub struct ConstantPredictor(f64);

impl ConstantPredictor {
    pub fn new(c: f64) -> Self {
        Self(if c.is_nan() { 0.0 } else { c.clamp(0.0, 1.0) })
    }
}

impl Predictor for ConstantPredictor {
    fn predict_raw(&self, _key: Key) -> f64 {
        self.0
    }
}

/// Adversarial predictor: a stateless hash of the key bits, so positions are
/// uncorrelated with order but still deterministic per (seed, key).
#[derive(Debug, Clone, Copy)]
pub struct SeededRandomPredictor {
    seed: u64,
}

impl SeededRandomPredictor {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }
}

impl Predictor for SeededRandomPredictor {
    fn predict_raw(&self, key: Key) -> f64 {
        hash_to_unit(self.seed, key.value().to_bits())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::validate_keys;

    fn keys(vals: &[f64]) -> Vec<Key> {
        validate_keys(vals).unwrap()
    }

    #[test]
    fn constant_returns_its_value() {
        let p = ConstantPredictor::new(0.5);
        let mut c = OpCounters::default();
        assert_eq!(p.forward(keys(&[123.0])[0], &mut c), 0.5);
        assert_eq!(p.forward(keys(&[-9.0])[0], &mut c), 0.5);
        assert_eq!(c.model_invocations, 2);
    }

    #[test]
    fn constant_clamps_out_of_range() {
        assert_eq!(ConstantPredictor::new(7.0).predict_raw(keys(&[0.0])[0]), 1.0);
    }

    #[test]
    fn oracle_minimum_maps_to_zero() {
        let p = OracleRank::new(keys(&[10.0, 20.0, 30.0, 40.0]));
        let mut c = OpCounters::default();
        assert_eq!(p.forward(keys(&[10.0])[0], &mut c), 0.0);
        assert_eq!(p.forward(keys(&[40.0])[0], &mut c), 1.0);
        assert_eq!(p.forward(keys(&[25.0])[0], &mut c), 2.0 / 3.0);
    }

    #[test]
    fn oracle_duplicates_share_first_rank() {
        let p = OracleRank::new(keys(&[1.0, 2.0, 2.0, 3.0]));
        assert_eq!(p.predict_raw(keys(&[2.0])[0]), 1.0 / 3.0);
    }

    #[test]
    fn oracle_degenerate_sets() {
        let p = OracleRank::new(vec![]);
        assert_eq!(p.predict_raw(keys(&[5.0])[0]), 0.5);
        let p = OracleRank::new(keys(&[5.0]));
        assert_eq!(p.predict_raw(keys(&[5.0])[0]), 0.5);
    }

    #[test]
    fn seeded_random_is_deterministic_and_in_range() {
        let p = SeededRandomPredictor::new(99);
        let q = SeededRandomPredictor::new(99);
        let mut c = OpCounters::default();
        for v in [0.0, 1.5, -3.25, 1e9] {
            let k = keys(&[v])[0];
            let a = p.forward(k, &mut c);
            assert_eq!(a, q.forward(k, &mut c));
            assert!((0.0..=1.0).contains(&a));
        }
    }
}
