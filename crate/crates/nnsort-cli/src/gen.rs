//! `gen`: synthetic dataset files.

use crate::{CliError, CliResult};
use clap::{Args, ValueEnum};
use nnsort::datagen::{generate, noisy_mix, Distribution};
use nnsort::dataset::save_keys;
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DistName {
    Uniform,
    Normal,
    Lognormal,
    /// Uniform data with a share of normal-distributed noise keys
    NoisyMix,
}

#[derive(Args)]
pub struct GenArgs {
    /// Distribution to draw from
    #[arg(long, value_enum)]
    pub dist: DistName,
    /// Number of keys
    #[arg(long)]
    pub n: usize,
    /// Generator seed
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output path (.bin or .csv)
    #[arg(long)]
    pub out: PathBuf,
    /// Uniform lower bound
    #[arg(long, default_value_t = 0.0)]
    pub lo: f64,
    /// Uniform upper bound (exclusive)
    #[arg(long, default_value_t = 1.0)]
    pub hi: f64,
    /// Normal mean
    #[arg(long, default_value_t = 0.0)]
    pub mean: f64,
    /// Normal standard deviation
    #[arg(long, default_value_t = 1.0)]
    pub stddev: f64,
    /// Log-normal location
    #[arg(long, default_value_t = 0.0)]
    pub mu: f64,
    /// Log-normal scale
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    /// Noise share for noisy-mix, in [0, 1]
    #[arg(long, default_value_t = 0.0)]
    pub noise_fraction: f64,
}

pub fn run(args: GenArgs) -> CliResult {
    let keys = match args.dist {
        DistName::Uniform => generate(Distribution::Uniform { lo: args.lo, hi: args.hi }, args.n, args.seed),
        DistName::Normal => generate(
            Distribution::Normal { mean: args.mean, std_dev: args.stddev },
            args.n,
            args.seed,
        ),
        DistName::Lognormal => generate(
            Distribution::LogNormal { mu: args.mu, sigma: args.sigma },
            args.n,
            args.seed,
        ),
        DistName::NoisyMix => noisy_mix(args.n, args.noise_fraction, args.seed),
    }
    .map_err(|e| CliError::Data(e.into()))?;
    save_keys(&keys, &args.out).map_err(|e| CliError::Data(e.into()))?;
    eprintln!("wrote {} keys to {}", keys.len(), args.out.display());
    Ok(())
}

/// Shared helper for commands that generate datasets on the fly.
pub fn named_distribution(name: DistName) -> Distribution {
    match name {
        DistName::Uniform => Distribution::uniform01(),
        DistName::Normal => Distribution::standard_normal(),
        DistName::Lognormal => Distribution::standard_lognormal(),
        DistName::NoisyMix => Distribution::uniform01(),
    }
}

impl std::fmt::Display for DistName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            DistName::Uniform => "uniform",
            DistName::Normal => "normal",
            DistName::Lognormal => "lognormal",
            DistName::NoisyMix => "noisy-mix",
        };
        write!(f, "{name}")
    }
}
