//! `train`: fit the position model on a dataset file, write the model file
//! and a per-epoch loss CSV.

use crate::{CliError, CliResult};
use clap::Args;
use nnsort::dataset::load_keys;
use nnsort::model::{save_model, train, TrainConfig};
use std::path::PathBuf;

#[derive(Args)]
pub struct TrainArgs {
    /// Training dataset (.bin or .csv)
    #[arg(long)]
    pub data: PathBuf,
    /// Where to write the model file
    #[arg(long)]
    pub out: PathBuf,
    /// Where to write the loss history CSV (default: <out>.loss.csv)
    #[arg(long)]
    pub loss_out: Option<PathBuf>,
    /// Huber threshold
    #[arg(long, default_value_t = 1.0)]
    pub delta: f64,
    /// Training epochs
    #[arg(long, default_value_t = 500)]
    pub epochs: usize,
    /// Mini-batch size
    #[arg(long, default_value_t = 256)]
    pub batch: usize,
    /// Adadelta decay
    #[arg(long, default_value_t = 0.95)]
    pub rho: f64,
    /// Adadelta stabilizer
    #[arg(long, default_value_t = 1e-6)]
    pub eps_opt: f64,
    /// Initialization and shuffle seed
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

pub fn run(args: TrainArgs) -> CliResult {
    let keys = load_keys(&args.data).map_err(|e| CliError::Data(e.into()))?;
    let cfg = TrainConfig {
        delta: args.delta,
        epochs: args.epochs,
        batch_size: args.batch,
        rho: args.rho,
        eps_opt: args.eps_opt,
        rng_seed: args.seed,
    };
    let outcome = train(&keys, &cfg).map_err(|e| CliError::Data(e.into()))?;
    save_model(&outcome.model, &args.out).map_err(|e| CliError::Data(e.into()))?;

    let loss_path = args.loss_out.unwrap_or_else(|| {
        let mut name = args.out.as_os_str().to_owned();
        name.push(".loss.csv");
        PathBuf::from(name)
    });
    let mut writer = csv::Writer::from_path(&loss_path)
        .map_err(|e| CliError::Data(anyhow::anyhow!("writing {}: {e}", loss_path.display())))?;
    writer.write_record(["epoch", "mean_huber_loss", "elapsed_seconds"])?;
    for (epoch, (loss, elapsed)) in outcome
        .epoch_losses
        .iter()
        .zip(&outcome.epoch_elapsed_seconds)
        .enumerate()
    {
        writer.write_record([epoch.to_string(), loss.to_string(), elapsed.to_string()])?;
    }
    writer.flush().map_err(|e| CliError::Data(e.into()))?;

    eprintln!(
        "trained on {} keys: first-epoch loss {:.6}, final {:.6}; model at {}",
        keys.len(),
        outcome.epoch_losses.first().unwrap(),
        outcome.epoch_losses.last().unwrap(),
        args.out.display()
    );
    Ok(())
}
