//! The regression network: 1 input, hidden layers of 32, 8, and 4 rectifier
//! units, one linear output. Parameters live in a single flat array in layer
//! order (weights row-major, then biases), which keeps the optimizer state,
//! serialization, and gradient checks all indexing the same way.

use super::Predictor;
use crate::types::{normalize_unchecked, ConfigError, Key};

pub(crate) const H1: usize = 32;
pub(crate) const H2: usize = 8;
pub(crate) const H3: usize = 4;

pub(crate) const W1_OFF: usize = 0;
pub(crate) const B1_OFF: usize = W1_OFF + H1;
pub(crate) const W2_OFF: usize = B1_OFF + H1;
pub(crate) const B2_OFF: usize = W2_OFF + H2 * H1;
pub(crate) const W3_OFF: usize = B2_OFF + H2;
pub(crate) const B3_OFF: usize = W3_OFF + H3 * H2;
pub(crate) const W4_OFF: usize = B3_OFF + H3;
pub(crate) const B4_OFF: usize = W4_OFF + H3;

/// Total parameter count of the 1-32-8-4-1 network (369). Also the default
/// per-invocation operation charge used by the cost model.
pub const PARAM_COUNT: usize = B4_OFF + 1;

/// Post-activation values of each hidden layer, kept for backpropagation.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Trace {
    pub a1: [f64; H1],
    pub a2: [f64; H2],
    pub a3: [f64; H3],
}

/// Input scaling applied ahead of the first layer: `[0,1] -> [-1,1]`.
#[inline]
pub(crate) fn centered(x: f64) -> f64 {
    2.0 * x - 1.0
}

#[derive(Debug, Clone)]
pub struct MlpModel {
    pub(crate) params: Vec<f64>,
    norm_lo: f64,
    norm_hi: f64,
}

impl MlpModel {
    /// Builds a model from a flat parameter vector and training-set bounds.
    pub fn from_params(params: Vec<f64>, norm_lo: f64, norm_hi: f64) -> Result<Self, ConfigError> {
        assert_eq!(params.len(), PARAM_COUNT, "expected {PARAM_COUNT} parameters");
        if !(norm_lo < norm_hi) || !norm_lo.is_finite() || !norm_hi.is_finite() {
            return Err(ConfigError::BadBounds { lo: norm_lo, hi: norm_hi });
        }
        Ok(Self { params, norm_lo, norm_hi })
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn param(&self, i: usize) -> f64 {
        self.params[i]
    }

    pub fn set_param(&mut self, i: usize, v: f64) {
        self.params[i] = v;
    }

    pub fn norm_bounds(&self) -> (f64, f64) {
        (self.norm_lo, self.norm_hi)
    }

    pub fn layer_dims() -> [usize; 5] {
        [1, H1, H2, H3, 1]
    }

    /// Network output for an already-normalized input in `[0, 1]`.
    pub(crate) fn raw_output(&self, x: f64) -> f64 {
        self.traced_output(x).0
    }

    pub(crate) fn traced_output(&self, x: f64) -> (f64, Trace) {
        let p = &self.params;
        // Center the unit-range input; rectifier units fed only non-negative
        // values die too easily.
        let cx = centered(x);
        let mut a1 = [0.0; H1];
        for j in 0..H1 {
            a1[j] = (p[W1_OFF + j] * cx + p[B1_OFF + j]).max(0.0);
        }
        let mut a2 = [0.0; H2];
        for r in 0..H2 {
            let mut z = p[B2_OFF + r];
            let row = W2_OFF + r * H1;
            for c in 0..H1 {
                z += p[row + c] * a1[c];
            }
            a2[r] = z.max(0.0);
        }
        let mut a3 = [0.0; H3];
        for r in 0..H3 {
            let mut z = p[B3_OFF + r];
            let row = W3_OFF + r * H2;
            for c in 0..H2 {
                z += p[row + c] * a2[c];
            }
            a3[r] = z.max(0.0);
        }
        let mut y = p[B4_OFF];
        for c in 0..H3 {
            y += p[W4_OFF + c] * a3[c];
        }
        (y, Trace { a1, a2, a3 })
    }
}

impl Predictor for MlpModel {
    fn predict_raw(&self, key: Key) -> f64 {
        let x = normalize_unchecked(key.value(), self.norm_lo, self.norm_hi);
        self.raw_output(x)
    }
}
