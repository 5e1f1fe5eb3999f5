//! `bench`: the algorithm comparison matrix. One row per (algorithm,
//! distribution, size, trial) plus a median row per cell group. Models are
//! trained on the fly, one per distribution, and shared across algorithms so
//! conflict rates are comparable.

use crate::gen::{named_distribution, DistName};
use crate::verify::checksum;
use crate::{CliError, CliResult};
use clap::Args;
use nnsort::analysis::DEFAULT_THETA;
use nnsort::baselines::{heapsort, mergesort, quicksort, single_pass_learned_sort};
use nnsort::datagen::{generate, noisy_mix};
use nnsort::model::{train, MlpModel, TrainConfig};
use nnsort::rng::SplitMix64;
use nnsort::sort::nn_sort;
use nnsort::types::{Key, OpCounters, SortConfig};
use std::path::PathBuf;
use std::time::Instant;

#[derive(Args)]
pub struct BenchArgs {
    /// Distributions to include (repeatable)
    #[arg(long = "dist", value_enum, num_args = 1.., default_values_t = [DistName::Uniform, DistName::Normal, DistName::Lognormal])]
    pub dists: Vec<DistName>,
    /// Dataset sizes to include (repeatable)
    #[arg(long = "n", num_args = 1.., default_values_t = [100_000usize])]
    pub sizes: Vec<usize>,
    /// Base seed; per-cell seeds derive from it
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Independent trials per cell (medians reported over these)
    #[arg(long, default_value_t = 3)]
    pub trials: usize,
    /// Relaxation factor
    #[arg(long, default_value_t = 2.0)]
    pub m: f64,
    /// Conflict-size threshold
    #[arg(long, default_value_t = 1000)]
    pub tau: usize,
    /// Iteration cap
    #[arg(long, default_value_t = 3)]
    pub epsilon: usize,
    /// Model charge per invocation
    #[arg(long, default_value_t = DEFAULT_THETA)]
    pub theta: f64,
    /// Training-set size for the on-the-fly models
    #[arg(long, default_value_t = 20_000)]
    pub train_n: usize,
    /// Training epochs for the on-the-fly models
    #[arg(long, default_value_t = 30)]
    pub epochs: usize,
    /// Training batch size
    #[arg(long, default_value_t = 256)]
    pub batch: usize,
    /// Huber threshold
    #[arg(long, default_value_t = 1.0)]
    pub delta: f64,
    /// Noise share used when benching the noisy-mix distribution
    #[arg(long, default_value_t = 0.45)]
    pub noise_fraction: f64,
    /// Run trials on worker threads (deterministic rows, noisier timings)
    #[arg(long, default_value_t = false)]
    pub parallel_trials: bool,
    /// Where to write the results CSV; omitted = stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

const ALGORITHMS: &[&str] =
    &["quicksort", "heapsort", "mergesort", "single_pass", "nn_sort", "redis_sort"];

#[derive(Debug, Clone)]
struct Row {
    algorithm: &'static str,
    distribution: String,
    n: usize,
    trial: String,
    status: &'static str,
    conflict_rate: Option<f64>,
    ops: Option<f64>,
    time_s: Option<f64>,
    rate_eps: Option<f64>,
}

pub fn run(args: BenchArgs) -> CliResult {
    if args.trials == 0 {
        return Err(CliError::Usage("need at least one trial".into()));
    }
    let sort_cfg = SortConfig::new(args.m, args.tau, args.epsilon)
        .map_err(|e| CliError::Data(e.into()))?;

    let mut rows: Vec<Row> = Vec::new();
    for (dist_idx, &dist) in args.dists.iter().enumerate() {
        let model = train_cell_model(&args, dist, dist_idx)?;
        for &n in &args.sizes {
            let trial_rows = run_trials(&args, dist, dist_idx, n, &model, &sort_cfg)?;
            let mut grouped: Vec<Vec<Row>> = vec![Vec::new(); ALGORITHMS.len()];
            for row in trial_rows {
                let slot = ALGORITHMS.iter().position(|a| *a == row.algorithm).unwrap();
                grouped[slot].push(row);
            }
            for group in grouped {
                if group.is_empty() {
                    continue;
                }
                let median = median_row(&group);
                rows.extend(group);
                rows.push(median);
            }
        }
    }

    let mut out = String::new();
    out.push_str(
        "algorithm,distribution,n,trial,status,conflict_rate,ops,sorting_time_s,sorting_rate_eps\n",
    );
    for r in &rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.algorithm,
            r.distribution,
            r.n,
            r.trial,
            r.status,
            r.conflict_rate.map(|v| v.to_string()).unwrap_or_default(),
            r.ops.map(|v| v.to_string()).unwrap_or_default(),
            r.time_s.map(|v| v.to_string()).unwrap_or_default(),
            r.rate_eps.map(|v| v.to_string()).unwrap_or_default(),
        ));
    }
    match &args.out {
        Some(p) => std::fs::write(p, out)
            .map_err(|e| CliError::Data(anyhow::anyhow!("writing {}: {e}", p.display())))?,
        None => print!("{out}"),
    }
    Ok(())
}

fn train_cell_model(args: &BenchArgs, dist: DistName, dist_idx: usize) -> Result<MlpModel, CliError> {
    let train_seed = derive_seed(args.seed, &[0xA11CE, dist_idx as u64]);
    let training = match dist {
        DistName::NoisyMix => {
            // Train on the clean uniform side; the mix is what gets sorted.
            generate(named_distribution(dist), args.train_n, train_seed)
        }
        _ => generate(named_distribution(dist), args.train_n, train_seed),
    }
    .map_err(|e| CliError::Data(e.into()))?;
    let cfg = TrainConfig {
        delta: args.delta,
        epochs: args.epochs,
        batch_size: args.batch.min(args.train_n.max(1)),
        rng_seed: derive_seed(args.seed, &[0x7EA1, dist_idx as u64]),
        ..Default::default()
    };
    train(&training, &cfg)
        .map(|outcome| outcome.model)
        .map_err(|e| CliError::Data(e.into()))
}

fn run_trials(
    args: &BenchArgs,
    dist: DistName,
    dist_idx: usize,
    n: usize,
    model: &MlpModel,
    sort_cfg: &SortConfig,
) -> Result<Vec<Row>, CliError> {
    let run_one = |trial: usize| -> Result<Vec<Row>, CliError> {
        let data_seed = derive_seed(args.seed, &[dist_idx as u64, n as u64, trial as u64]);
        let input = match dist {
            DistName::NoisyMix => noisy_mix(n, args.noise_fraction, data_seed),
            _ => generate(named_distribution(dist), n, data_seed),
        }
        .map_err(|e| CliError::Data(e.into()))?;
        Ok(bench_cell(args, dist, n, trial, &input, model, sort_cfg))
    };

    if args.parallel_trials {
        let results: Vec<Result<Vec<Row>, CliError>> = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..args.trials)
                .map(|trial| scope.spawn(move || run_one(trial)))
                .collect();
            handles.into_iter().map(|h| h.join().expect("trial thread panicked")).collect()
        });
        let mut rows = Vec::new();
        for r in results {
            rows.extend(r?);
        }
        Ok(rows)
    } else {
        let mut rows = Vec::new();
        for trial in 0..args.trials {
            rows.extend(run_one(trial)?);
        }
        Ok(rows)
    }
}

// One trial of every algorithm on one dataset. The mergesort output doubles
// as the oracle: anything that disagrees with it is marked failed.
fn bench_cell(
    args: &BenchArgs,
    dist: DistName,
    n: usize,
    trial: usize,
    input: &[Key],
    model: &MlpModel,
    sort_cfg: &SortConfig,
) -> Vec<Row> {
    let distribution = dist.to_string();
    let trial_label = trial.to_string();
    let mut rows = Vec::with_capacity(ALGORITHMS.len());
    let base = Row {
        algorithm: "",
        distribution: distribution.clone(),
        n,
        trial: trial_label,
        status: "ok",
        conflict_rate: None,
        ops: None,
        time_s: None,
        rate_eps: None,
    };

    let mut oracle = input.to_vec();
    let mut counters = OpCounters::default();
    let started = Instant::now();
    mergesort(&mut oracle, &mut counters);
    let elapsed = started.elapsed().as_secs_f64();
    let oracle_ok = oracle.windows(2).all(|w| w[0] <= w[1])
        && checksum(input).count == checksum(&oracle).count;
    rows.push(Row {
        algorithm: "mergesort",
        status: if oracle_ok { "ok" } else { "failed" },
        ops: Some(counters.total_ops(args.theta)),
        time_s: Some(elapsed),
        rate_eps: rate(n, elapsed),
        ..base.clone()
    });

    for algorithm in ["quicksort", "heapsort"] {
        let mut data = input.to_vec();
        let mut counters = OpCounters::default();
        let started = Instant::now();
        match algorithm {
            "quicksort" => quicksort(&mut data, &mut counters),
            _ => heapsort(&mut data, &mut counters),
        }
        let elapsed = started.elapsed().as_secs_f64();
        rows.push(Row {
            algorithm: ALGORITHMS.iter().find(|a| **a == algorithm).unwrap(),
            status: if data == oracle { "ok" } else { "failed" },
            ops: Some(counters.total_ops(args.theta)),
            time_s: Some(elapsed),
            rate_eps: rate(n, elapsed),
            ..base.clone()
        });
    }

    let started = Instant::now();
    let (sp_sorted, sp_rate, sp_counters) = single_pass_learned_sort(input, model, args.m);
    let elapsed = started.elapsed().as_secs_f64();
    rows.push(Row {
        algorithm: "single_pass",
        status: if sp_sorted == oracle { "ok" } else { "failed" },
        conflict_rate: Some(sp_rate),
        ops: Some(sp_counters.total_ops(args.theta)),
        time_s: Some(elapsed),
        rate_eps: rate(n, elapsed),
        ..base.clone()
    });

    let started = Instant::now();
    let (nn_sorted, runset) = nn_sort(input, model, sort_cfg);
    let elapsed = started.elapsed().as_secs_f64();
    rows.push(Row {
        algorithm: "nn_sort",
        status: if nn_sorted == oracle { "ok" } else { "failed" },
        conflict_rate: Some(runset.fallback_fraction()),
        ops: Some(runset.counters.total_ops(args.theta)),
        time_s: Some(elapsed),
        rate_eps: rate(n, elapsed),
        ..base.clone()
    });

    // External service; kept in the schema for table parity.
    rows.push(Row { algorithm: "redis_sort", status: "unavailable", ..base });
    rows
}

fn rate(n: usize, seconds: f64) -> Option<f64> {
    (seconds > 0.0).then(|| n as f64 / seconds)
}

fn median_row(group: &[Row]) -> Row {
    let ok: Vec<&Row> = group.iter().filter(|r| r.status == "ok").collect();
    let template = &group[0];
    let pick = |f: fn(&Row) -> Option<f64>| -> Option<f64> {
        let mut vals: Vec<f64> = ok.iter().filter_map(|r| f(r)).collect();
        if vals.is_empty() {
            return None;
        }
        vals.sort_by(f64::total_cmp);
        let mid = vals.len() / 2;
        Some(if vals.len() % 2 == 1 { vals[mid] } else { (vals[mid - 1] + vals[mid]) / 2.0 })
    };
    Row {
        algorithm: template.algorithm,
        distribution: template.distribution.clone(),
        n: template.n,
        trial: "median".to_string(),
        status: if template.status == "unavailable" {
            "unavailable"
        } else if ok.len() == group.len() {
            "ok"
        } else {
            "partial"
        },
        conflict_rate: pick(|r| r.conflict_rate),
        ops: pick(|r| r.ops),
        time_s: pick(|r| r.time_s),
        rate_eps: pick(|r| r.rate_eps),
    }
}

fn derive_seed(base: u64, parts: &[u64]) -> u64 {
    let mut rng = SplitMix64::new(base);
    let mut acc = rng.next_u64();
    for &p in parts {
        let mut mixer = SplitMix64::new(acc ^ p.wrapping_mul(0x9E37_79B9_7F4A_7C15));
        acc = mixer.next_u64();
    }
    acc
}
