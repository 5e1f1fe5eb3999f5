//! The model-guided sort driver: repeatedly map keys to relaxed slot arrays,
//! collect collisions into a conflict array, stop on the size threshold or
//! the iteration cap, quicksort the leftover conflicts, then polish and
//! merge everything into the exact result.

use crate::baselines::quicksort;
use crate::model::Predictor;
use crate::polish::{self, count_out_of_order};
use crate::types::{IterationMetrics, Key, OpCounters, SortConfig};
use serde::{Deserialize, Serialize};
use std::time::{Duration, Instant};

/// Slot index for a position estimate: the slot space has
/// `S = ceil(m * batch_size)` entries and the logit picks one by rounding.
/// Monotone non-decreasing in the logit.
pub fn position(logit: f64, m: f64, batch_size: usize) -> usize {
    debug_assert!(batch_size >= 1);
    let slots = (m * batch_size as f64).ceil() as usize;
    let idx = (logit.clamp(0.0, 1.0) * (slots - 1) as f64).round() as usize;
    idx.min(slots - 1)
}

/// One mapping pass: every key goes to its predicted slot if that slot is
/// still empty, otherwise it is appended to the conflict array in input
/// order (first arrival keeps the slot).
pub fn map_iteration(
    input: &[Key],
    predictor: &dyn Predictor,
    m: f64,
    iteration_index: usize,
    counters: &mut OpCounters,
) -> (Vec<Option<Key>>, Vec<Key>, IterationMetrics) {
    assert!(!input.is_empty(), "map_iteration needs a non-empty input");
    let slots = (m * input.len() as f64).ceil() as usize;
    let mut out: Vec<Option<Key>> = vec![None; slots];
    let mut conflicts: Vec<Key> = Vec::new();
    for &key in input {
        let logit = predictor.forward(key, counters);
        let pos = position(logit, m, input.len());
        match out[pos] {
            None => {
                counters.record_moves(1);
                out[pos] = Some(key);
            }
            Some(_) => {
                counters.record_moves(1);
                conflicts.push(key);
            }
        }
    }

    // Metric bookkeeping on the placed keys, not charged as work.
    let placed: Vec<Key> = out.iter().flatten().copied().collect();
    let out_of_order_rate = count_out_of_order(&placed) as f64 / placed.len().max(1) as f64;
    let metrics =
        IterationMetrics::new(iteration_index, input.len(), conflicts.len(), out_of_order_rate);
    (out, conflicts, metrics)
}

/// Everything a sort run leaves behind: the sparse runs, the sorted final
/// conflict array, per-iteration metrics, and the instrumentation split by
/// phase.
#[derive(Debug, Clone)]
pub struct RunSet {
    /// Sparse output array of each completed iteration, in iteration order.
    pub runs: Vec<Vec<Option<Key>>>,
    /// The last conflict array, already sorted by the fallback quicksort.
    pub final_conflicts: Vec<Key>,
    pub metrics: Vec<IterationMetrics>,
    /// Total operation counts for the whole call.
    pub counters: OpCounters,
    pub phases: PhaseCounters,
    pub config: SortConfig,
    pub input_len: usize,
    /// Insertions performed while polishing (one per mis-ordered key).
    pub polish_insertions: u64,
}

impl RunSet {
    /// Completed mapping iterations.
    pub fn iterations(&self) -> usize {
        self.metrics.len()
    }

    /// Fraction of the input that fell through to the fallback sort.
    pub fn fallback_fraction(&self) -> f64 {
        if self.input_len == 0 {
            0.0
        } else {
            self.final_conflicts.len() as f64 / self.input_len as f64
        }
    }
}

/// Instrumentation split into the three phases of a run.
#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
pub struct PhaseCounters {
    /// First mapping iteration.
    pub approximate_ordering: OpCounters,
    /// Later iterations plus the fallback sort of the final conflicts.
    pub handling_conflicts: OpCounters,
    /// Compaction, correction, and merging.
    pub merging: OpCounters,
}

impl PhaseCounters {
    pub fn total(&self) -> OpCounters {
        OpCounters::sum(&[self.approximate_ordering, self.handling_conflicts, self.merging])
    }
}

/// Wall-clock time spent in each phase.
#[derive(Debug, Clone, Copy, Default)]
pub struct PhaseDurations {
    pub approximate_ordering: Duration,
    pub handling_conflicts: Duration,
    pub merging: Duration,
}

/// Sorts `input` with a predictor. Returns the sorted keys plus the full
/// run record. Inputs no larger than `tau` skip the model entirely and go
/// straight to quicksort.
pub fn nn_sort(
    input: &[Key],
    predictor: &dyn Predictor,
    cfg: &SortConfig,
) -> (Vec<Key>, RunSet) {
    let (sorted, runset, _) = nn_sort_timed(input, predictor, cfg);
    (sorted, runset)
}

/// `nn_sort` with per-phase wall-clock durations.
pub fn nn_sort_timed(
    input: &[Key],
    predictor: &dyn Predictor,
    cfg: &SortConfig,
) -> (Vec<Key>, RunSet, PhaseDurations) {
    let mut phases = PhaseCounters::default();
    let mut durations = PhaseDurations::default();
    let mut runs: Vec<Vec<Option<Key>>> = Vec::new();
    let mut metrics: Vec<IterationMetrics> = Vec::new();

    let mut conflicts: Vec<Key> = input.to_vec();
    if conflicts.len() > cfg.tau() {
        let mut iteration = 0;
        while iteration < cfg.epsilon() && conflicts.len() > cfg.tau() {
            let started = Instant::now();
            let target = if iteration == 0 {
                &mut phases.approximate_ordering
            } else {
                &mut phases.handling_conflicts
            };
            let (run, next_conflicts, iter_metrics) =
                map_iteration(&conflicts, predictor, cfg.m(), iteration, target);
            runs.push(run);
            metrics.push(iter_metrics);
            conflicts = next_conflicts;
            let elapsed = started.elapsed();
            if iteration == 0 {
                durations.approximate_ordering += elapsed;
            } else {
                durations.handling_conflicts += elapsed;
            }
            iteration += 1;
        }
    }

    let started = Instant::now();
    quicksort(&mut conflicts, &mut phases.handling_conflicts);
    durations.handling_conflicts += started.elapsed();

    let started = Instant::now();
    let (sorted, insertions) = polish::merge(&runs, conflicts.clone(), &mut phases.merging);
    durations.merging = started.elapsed();

    let runset = RunSet {
        runs,
        final_conflicts: conflicts,
        metrics,
        counters: phases.total(),
        phases,
        config: *cfg,
        input_len: input.len(),
        polish_insertions: insertions,
    };
    (sorted, runset, durations)
}

/// Per-phase operation report for a completed run, with each model
/// invocation charged `theta` operations.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PhaseBreakdown {
    pub approximate_ordering_ops: f64,
    pub handling_conflicts_ops: f64,
    pub merging_ops: f64,
    pub total_ops: f64,
}

pub fn phase_breakdown(runset: &RunSet, theta: f64) -> PhaseBreakdown {
    let p = &runset.phases;
    PhaseBreakdown {
        approximate_ordering_ops: p.approximate_ordering.total_ops(theta),
        handling_conflicts_ops: p.handling_conflicts.total_ops(theta),
        merging_ops: p.merging.total_ops(theta),
        total_ops: runset.counters.total_ops(theta),
    }
}
