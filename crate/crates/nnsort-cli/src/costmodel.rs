//! `costmodel`: evaluate the general-case coefficients and break-even size,
//! either from explicit parameters or from a metrics report produced by
//! `sort` (predicted vs measured operations).

use crate::report::{CostModelDoc, CostParamsDoc, MeasuredVsPredicted, SortMetricsDoc};
use crate::{write_output, CliError, CliResult};
use clap::Args;
use nnsort::analysis::{
    break_even_with, coeffs_general, t_best, t_general_with, t_worst, CostParams, DEFAULT_THETA,
};
use std::path::PathBuf;

#[derive(Args)]
pub struct CostmodelArgs {
    /// Metrics JSON from the sort command; parameters are extracted from it
    #[arg(long, conflicts_with_all = ["sigma", "e", "t"])]
    pub metrics: Option<PathBuf>,
    /// Per-iteration conflict rate in [0, 1)
    #[arg(long, requires = "e", requires = "t")]
    pub sigma: Option<f64>,
    /// Per-iteration mis-order rate in [0, 1]
    #[arg(long)]
    pub e: Option<f64>,
    /// Completed iterations
    #[arg(long)]
    pub t: Option<u32>,
    /// Model charge per invocation
    #[arg(long, default_value_t = DEFAULT_THETA)]
    pub theta: f64,
    /// Evaluate the general-case total at this n
    #[arg(long)]
    pub n: Option<f64>,
    /// Where to write the report JSON; omitted = stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(args: CostmodelArgs) -> CliResult {
    let (params, measured_ops) = match (&args.metrics, args.sigma) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Data(anyhow::anyhow!("reading {}: {e}", path.display())))?;
            let doc: SortMetricsDoc = serde_json::from_str(&text)
                .map_err(|e| CliError::Data(anyhow::anyhow!("parsing {}: {e}", path.display())))?;
            if doc.iterations.is_empty() {
                return Err(CliError::Data(anyhow::anyhow!(
                    "metrics report has no mapping iterations (bypass run); the general-case \
                     model needs at least one"
                )));
            }
            let sigma = geometric_mean(doc.iterations.iter().map(|m| m.sigma));
            let e = doc.iterations.iter().map(|m| m.out_of_order_rate).sum::<f64>()
                / doc.iterations.len() as f64;
            let params = CostParams {
                n: doc.dataset.n as f64,
                theta: args.theta,
                sigma: sigma.min(1.0 - 1e-12),
                e: e.min(1.0),
                t: doc.iterations.len() as u32,
                epsilon: doc.config.epsilon as u32,
            };
            (params, Some(doc.counters.total_ops(args.theta)))
        }
        (None, Some(sigma)) => {
            let params = CostParams {
                n: args.n.unwrap_or(0.0),
                theta: args.theta,
                sigma,
                e: args.e.expect("clap enforces --e with --sigma"),
                t: args.t.expect("clap enforces --t with --sigma"),
                epsilon: args.t.unwrap(),
            };
            (params, None)
        }
        (None, None) => {
            return Err(CliError::Usage(
                "provide either --metrics or the --sigma/--e/--t parameter set".into(),
            ))
        }
    };

    let coeffs = coeffs_general(&params).map_err(|e| CliError::Data(e.into()))?;
    let break_even = break_even_with(&coeffs);
    let note = if break_even.is_finite() {
        format!("general case beats n*ln(n) for n > {break_even:.4e}")
    } else {
        "no finite break-even: C2 >= 1".to_string()
    };

    let measured = measured_ops.map(|ops| {
        let predicted = t_general_with(&coeffs, params.n);
        let best = t_best(params.n, params.theta);
        let worst = t_worst(params.n, params.theta, params.epsilon);
        MeasuredVsPredicted {
            measured_ops: ops,
            predicted_general_ops: predicted,
            measured_over_predicted: ops / predicted,
            predicted_best_ops: best,
            measured_over_best: ops / best,
            predicted_worst_ops: worst,
            measured_over_worst: ops / worst,
        }
    });

    let doc = CostModelDoc {
        params: CostParamsDoc {
            sigma: params.sigma,
            e: params.e,
            t: params.t,
            theta: params.theta,
            n: (params.n > 0.0).then_some(params.n),
        },
        c1: coeffs.c1,
        c2: coeffs.c2,
        break_even_n: break_even.is_finite().then_some(break_even),
        note,
        measured,
    };
    let mut json = serde_json::to_string_pretty(&doc).map_err(|e| CliError::Data(e.into()))?;
    json.push('\n');
    write_output(&args.out, &json)
}

fn geometric_mean(values: impl Iterator<Item = f64>) -> f64 {
    let mut log_sum = 0.0;
    let mut count = 0usize;
    for v in values {
        if v == 0.0 {
            return 0.0;
        }
        log_sum += v.ln();
        count += 1;
    }
    if count == 0 {
        0.0
    } else {
        (log_sum / count as f64).exp()
    }
}
