//! Serializable report documents. Deterministic fields come first;
//! everything wall-clock lives under a dedicated `wall_clock` object so
//! reports from identical seeded invocations can be diffed after dropping
//! that one subtree.

use nnsort::types::{IterationMetrics, OpCounters};
use serde::{Deserialize, Serialize};

#[derive(Debug, Serialize, Deserialize)]
pub struct SortMetricsDoc {
    pub dataset: DatasetSummary,
    pub config: SortConfigDoc,
    pub iterations: Vec<IterationMetrics>,
    pub final_conflict_size: usize,
    pub fallback_fraction: f64,
    pub polish_insertions: u64,
    pub counters: OpCounters,
    pub total_ops: f64,
    pub phase_ops: PhaseOpsDoc,
    pub self_check: String,
    pub wall_clock: SortWallClock,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct DatasetSummary {
    pub path: String,
    pub n: usize,
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub sum: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SortConfigDoc {
    pub m: f64,
    pub tau: usize,
    pub epsilon: usize,
    pub theta: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct PhaseOpsDoc {
    pub approximate_ordering_ops: f64,
    pub handling_conflicts_ops: f64,
    pub merging_ops: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SortWallClock {
    pub total_seconds: f64,
    pub approximate_ordering_seconds: f64,
    pub handling_conflicts_seconds: f64,
    pub merging_seconds: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CostModelDoc {
    pub params: CostParamsDoc,
    pub c1: f64,
    pub c2: f64,
    /// Absent when C2 >= 1 (no finite break-even).
    pub break_even_n: Option<f64>,
    pub note: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measured: Option<MeasuredVsPredicted>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CostParamsDoc {
    pub sigma: f64,
    pub e: f64,
    pub t: u32,
    pub theta: f64,
    pub n: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct MeasuredVsPredicted {
    pub measured_ops: f64,
    pub predicted_general_ops: f64,
    pub measured_over_predicted: f64,
    pub predicted_best_ops: f64,
    pub measured_over_best: f64,
    pub predicted_worst_ops: f64,
    pub measured_over_worst: f64,
}
