//! `iterations`: sweep the iteration cap over a range and report the final
//! conflict-array size and total time per cap.

use crate::verify::verify_sorted_permutation;
use crate::{CliError, CliResult};
use clap::Args;
use nnsort::dataset::load_keys;
use nnsort::model::load_model;
use nnsort::sort::nn_sort;
use nnsort::types::SortConfig;
use std::path::PathBuf;
use std::time::Instant;

#[derive(Args)]
pub struct IterationsArgs {
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
    /// First iteration cap of the sweep
    #[arg(long, default_value_t = 1)]
    pub eps_min: usize,
    /// Last iteration cap of the sweep (inclusive)
    #[arg(long, default_value_t = 5)]
    pub eps_max: usize,
    /// Where to write the sweep CSV; omitted = stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(args: IterationsArgs) -> CliResult {
    if args.eps_min == 0 || args.eps_min > args.eps_max {
        return Err(CliError::Usage(format!(
            "need 1 <= eps-min <= eps-max, got {}..{}",
            args.eps_min, args.eps_max
        )));
    }
    let keys = load_keys(&args.data).map_err(|e| CliError::Data(e.into()))?;
    let model = load_model(&args.model).map_err(|e| CliError::Data(e.into()))?;

    let mut rows = String::from("epsilon,last_conflict_size,total_time_s\n");
    for epsilon in args.eps_min..=args.eps_max {
        let cfg = SortConfig::new(args.m, args.tau, epsilon)
            .map_err(|e| CliError::Data(e.into()))?;
        let started = Instant::now();
        let (sorted, runset) = nn_sort(&keys, &model, &cfg);
        let elapsed = started.elapsed().as_secs_f64();
        verify_sorted_permutation(&keys, &sorted).map_err(CliError::Invariant)?;
        rows.push_str(&format!(
            "{epsilon},{},{elapsed}\n",
            runset.final_conflicts.len()
        ));
    }
    match &args.out {
        Some(p) => std::fs::write(p, rows)
            .map_err(|e| CliError::Data(anyhow::anyhow!("writing {}: {e}", p.display())))?,
        None => print!("{rows}"),
    }
    Ok(())
}
