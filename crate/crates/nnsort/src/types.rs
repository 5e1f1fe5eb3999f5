//! Shared domain types: validated sort keys, sort configuration, and the
//! operation counters that back the cost-model measurements.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A finite 64-bit floating-point sort key.
///
/// NaN and the infinities are rejected at construction; infinity stays
/// available as the conceptual empty-slot marker of the mapping phase, so no
/// valid key can collide with it.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Key(f64);

impl Key {
    pub fn new(value: f64) -> Result<Self, KeyError> {
        if value.is_finite() {
            Ok(Key(value))
        } else {
            Err(KeyError::NonFinite { index: 0, value })
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

// Keys are finite, so a total order exists; total_cmp keeps it deterministic
// (including the -0.0 / 0.0 edge) across every sorter in the crate.
impl PartialEq for Key {
    fn eq(&self, other: &Self) -> bool {
        self.0.total_cmp(&other.0) == std::cmp::Ordering::Equal
    }
}
impl Eq for Key {}
impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Key {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl std::fmt::Display for Key {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum KeyError {
    #[error("non-finite key {value} at index {index}")]
    NonFinite { index: usize, value: f64 },
}

/// Checks every element is finite and wraps the sequence as keys.
/// Order and duplicates are preserved; the first offending index is reported.
pub fn validate_keys(data: &[f64]) -> Result<Vec<Key>, KeyError> {
    for (index, &value) in data.iter().enumerate() {
        if !value.is_finite() {
            return Err(KeyError::NonFinite { index, value });
        }
    }
    Ok(data.iter().map(|&v| Key(v)).collect())
}

/// Unwraps keys back to raw doubles.
pub fn keys_to_raw(keys: &[Key]) -> Vec<f64> {
    keys.iter().map(|k| k.value()).collect()
}

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("relaxation factor m must be >= 1.0 and finite, got {0}")]
    BadRelaxation(f64),
    #[error("iteration cap epsilon must be >= 1")]
    BadIterationCap,
    #[error("normalization bounds require lo < hi, got lo={lo}, hi={hi}")]
    BadBounds { lo: f64, hi: f64 },
}

/// Knobs of the iterative mapping loop: relaxation factor `m`, conflict-size
/// threshold `tau`, and the iteration cap `epsilon`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SortConfig {
    m: f64,
    tau: usize,
    epsilon: usize,
}

impl SortConfig {
    pub fn new(m: f64, tau: usize, epsilon: usize) -> Result<Self, ConfigError> {
        if !m.is_finite() || m < 1.0 {
            return Err(ConfigError::BadRelaxation(m));
        }
        if epsilon == 0 {
            return Err(ConfigError::BadIterationCap);
        }
        Ok(Self { m, tau, epsilon })
    }

    pub fn m(&self) -> f64 {
        self.m
    }
    pub fn tau(&self) -> usize {
        self.tau
    }
    pub fn epsilon(&self) -> usize {
        self.epsilon
    }
}

impl Default for SortConfig {
    /// m = 2.0 (factor-two slack), tau = 1000, epsilon = 3.
    fn default() -> Self {
        Self { m: 2.0, tau: 1000, epsilon: 3 }
    }
}

/// Maps `x` into `[0, 1]` relative to the bounds, clamping outside values.
/// Monotone non-decreasing in `x`; `lo < hi` is required.
pub fn normalize(x: f64, lo: f64, hi: f64) -> Result<f64, ConfigError> {
    if !(lo < hi) {
        return Err(ConfigError::BadBounds { lo, hi });
    }
    Ok(normalize_unchecked(x, lo, hi))
}

#[inline]
pub(crate) fn normalize_unchecked(x: f64, lo: f64, hi: f64) -> f64 {
    ((x - lo) / (hi - lo)).clamp(0.0, 1.0)
}

/// Operation counts for one sort call. A comparison or a move of a key is one
/// unit; binary-insertion block shifts and model invocations are tracked
/// apart so the model charge `theta` can be applied when totalling.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpCounters {
    pub comparisons: u64,
    pub moves: u64,
    pub model_invocations: u64,
    pub insert_shifts: u64,
}

impl OpCounters {
    #[inline]
    pub fn record_comparisons(&mut self, n: u64) {
        self.comparisons += n;
    }
    #[inline]
    pub fn record_moves(&mut self, n: u64) {
        self.moves += n;
    }
    #[inline]
    pub fn record_model_invocation(&mut self) {
        self.model_invocations += 1;
    }
    #[inline]
    pub fn record_insert_shifts(&mut self, n: u64) {
        self.insert_shifts += n;
    }

    /// Total operations with each model invocation charged `theta` units.
    pub fn total_ops(&self, theta: f64) -> f64 {
        self.comparisons as f64
            + self.moves as f64
            + self.insert_shifts as f64
            + theta * self.model_invocations as f64
    }

    pub fn add(&mut self, other: &OpCounters) {
        self.comparisons += other.comparisons;
        self.moves += other.moves;
        self.model_invocations += other.model_invocations;
        self.insert_shifts += other.insert_shifts;
    }

    pub fn sum(parts: &[OpCounters]) -> OpCounters {
        let mut total = OpCounters::default();
        for p in parts {
            total.add(p);
        }
        total
    }
}

/// Per-iteration record: how many keys came in, how many collided (sigma),
/// and how mis-ordered the placed keys ended up (the e_i rate).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationMetrics {
    pub iteration_index: usize,
    pub input_size: usize,
    pub conflict_size: usize,
    /// conflict_size / input_size
    pub sigma: f64,
    /// mis-ordered fraction of the compacted placed keys
    pub out_of_order_rate: f64,
}

impl IterationMetrics {
    pub fn new(
        iteration_index: usize,
        input_size: usize,
        conflict_size: usize,
        out_of_order_rate: f64,
    ) -> Self {
        let sigma = if input_size > 0 {
            conflict_size as f64 / input_size as f64
        } else {
            0.0
        };
        Self { iteration_index, input_size, conflict_size, sigma, out_of_order_rate }
    }
}
