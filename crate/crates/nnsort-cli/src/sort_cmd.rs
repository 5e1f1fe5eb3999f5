//! `sort`: instrumented model-guided sort of a dataset file. Emits the
//! sorted output (optional) and a metrics JSON document.

use crate::report::{
    DatasetSummary, PhaseOpsDoc, SortConfigDoc, SortMetricsDoc, SortWallClock,
};
use crate::verify::{checksum, verify_sorted_permutation};
use crate::{write_output, CliError, CliResult};
use clap::Args;
use nnsort::analysis::DEFAULT_THETA;
use nnsort::dataset::{load_keys, save_keys};
use nnsort::model::load_model;
use nnsort::sort::{nn_sort_timed, phase_breakdown};
use nnsort::types::SortConfig;
use std::path::PathBuf;
use std::time::Instant;

#[derive(Args)]
pub struct SortArgs {
    /// Dataset to sort (.bin or .csv)
    #[arg(long)]
    pub data: PathBuf,
    /// Trained model file
    #[arg(long)]
    pub model: PathBuf,
    /// Relaxation factor
    #[arg(long, default_value_t = 2.0)]
    pub m: f64,
    /// Conflict-size threshold
    #[arg(long, default_value_t = 1000)]
    pub tau: usize,
    /// Iteration cap
    #[arg(long, default_value_t = 3)]
    pub epsilon: usize,
    /// Model charge per invocation used in the ops totals
    #[arg(long, default_value_t = DEFAULT_THETA)]
    pub theta: f64,
    /// Where to write the sorted keys (.bin or .csv); omitted = not written
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Where to write the metrics JSON; omitted = stdout
    #[arg(long)]
    pub metrics_out: Option<PathBuf>,
    /// Re-verify sortedness and multiset equality before reporting success
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    pub self_check: bool,
}

pub fn run(args: SortArgs) -> CliResult {
    let keys = load_keys(&args.data).map_err(|e| CliError::Data(e.into()))?;
    let model = load_model(&args.model).map_err(|e| CliError::Data(e.into()))?;
    let cfg = SortConfig::new(args.m, args.tau, args.epsilon)
        .map_err(|e| CliError::Data(e.into()))?;

    let started = Instant::now();
    let (sorted, runset, durations) = nn_sort_timed(&keys, &model, &cfg);
    let total_seconds = started.elapsed().as_secs_f64();

    let self_check = if args.self_check {
        verify_sorted_permutation(&keys, &sorted).map_err(CliError::Invariant)?;
        "passed"
    } else {
        "skipped"
    };

    if let Some(out) = &args.out {
        save_keys(&sorted, out).map_err(|e| CliError::Data(e.into()))?;
    }

    let input_sum = checksum(&keys);
    let phases = phase_breakdown(&runset, args.theta);
    let doc = SortMetricsDoc {
        dataset: DatasetSummary {
            path: args.data.display().to_string(),
            n: keys.len(),
            min: input_sum.min,
            max: input_sum.max,
            sum: input_sum.sum,
        },
        config: SortConfigDoc {
            m: args.m,
            tau: args.tau,
            epsilon: args.epsilon,
            theta: args.theta,
        },
        iterations: runset.metrics.clone(),
        final_conflict_size: runset.final_conflicts.len(),
        fallback_fraction: runset.fallback_fraction(),
        polish_insertions: runset.polish_insertions,
        counters: runset.counters,
        total_ops: runset.counters.total_ops(args.theta),
        phase_ops: PhaseOpsDoc {
            approximate_ordering_ops: phases.approximate_ordering_ops,
            handling_conflicts_ops: phases.handling_conflicts_ops,
            merging_ops: phases.merging_ops,
        },
        self_check: self_check.to_string(),
        wall_clock: SortWallClock {
            total_seconds,
            approximate_ordering_seconds: durations.approximate_ordering.as_secs_f64(),
            handling_conflicts_seconds: durations.handling_conflicts.as_secs_f64(),
            merging_seconds: durations.merging.as_secs_f64(),
        },
    };
    let mut json = serde_json::to_string_pretty(&doc).map_err(|e| CliError::Data(e.into()))?;
    json.push('\n');
    write_output(&args.metrics_out, &json)
}
