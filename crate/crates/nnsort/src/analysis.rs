//! Closed-form operation counts for the best, general, and worst cases, the
//! break-even size against n·log n comparison sorting, and reconciliation of
//! the formulas with measured counters. Logarithms are natural throughout.

use crate::sort::RunSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default per-invocation model charge: the parameter count of the
/// 1-32-8-4-1 network. The same constant prices model invocations when
/// totalling measured counters, so formulas and measurements share one theta.
pub const DEFAULT_THETA: f64 = crate::model::PARAM_COUNT as f64;

/// Inputs of the general-case formulas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostParams {
    /// Data points to be sorted. Real-valued so the formulas can be
    /// evaluated at fractional break-even multiples.
    pub n: f64,
    /// Operations charged per model invocation.
    pub theta: f64,
    /// Per-iteration collision rate.
    pub sigma: f64,
    /// Representative per-iteration mis-order rate.
    pub e: f64,
    /// Completed iterations.
    pub t: u32,
    /// Iteration cap.
    pub epsilon: u32,
}

#[derive(Debug, Error, PartialEq)]
pub enum AnalysisError {
    #[error("sigma must lie in [0, 1), got {0}")]
    BadSigma(f64),
    #[error("mis-order rate e must lie in [0, 1], got {0}")]
    BadMisorderRate(f64),
    #[error("completed iterations t must be >= 1")]
    BadIterations,
    #[error("theta must be non-negative and finite, got {0}")]
    BadTheta(f64),
}

/// Best case: one conflict-free iteration, so the model pass plus the
/// compaction pass is everything.
pub fn t_best(n: f64, theta: f64) -> f64 {
    if n <= 0.0 {
        0.0
    } else if n == 1.0 {
        1.0
    } else {
        theta * n + n
    }
}

/// Worst case: the model runs for all `epsilon` iterations without helping,
/// then everything is comparison-sorted and inserted.
pub fn t_worst(n: f64, theta: f64, epsilon: u32) -> f64 {
    if n <= 0.0 {
        0.0
    } else if n == 1.0 {
        1.0
    } else {
        theta * epsilon as f64 * n + 2.0 * n * n.ln()
    }
}

/// The linear and linearithmic coefficients of the general case.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coeffs {
    pub c1: f64,
    pub c2: f64,
}

/// Evaluates the general-case coefficients. `sigma = 0` is handled as the
/// limit (x·ln x -> 0).
pub fn coeffs_general(p: &CostParams) -> Result<Coeffs, AnalysisError> {
    validate(p)?;
    let sigma = p.sigma;
    let e = p.e;
    let t = p.t as i32;
    let theta = p.theta;

    // [(1-s) + (1-s^(t-1))(theta+1)] / (1-s)
    let first = ((1.0 - sigma) + (1.0 - sigma.powi(t - 1)) * (theta + 1.0)) / (1.0 - sigma);

    let mut sum = 0.0;
    for i in 1..=t {
        sum += sigma.powi(i) + (1.0 - e) * (sigma.powi(i - 1) - sigma.powi(i));
    }

    let sigma_t = sigma.powi(t);
    let tail = if sigma_t == 0.0 { 0.0 } else { sigma_t * sigma_t.ln() };

    let c1 = first + sum + tail;
    let c2 = sigma_t + e * (sigma_t + sigma.powi(t - 1));
    Ok(Coeffs { c1, c2 })
}

/// General case: `C1·n + C2·n·ln n` with the coefficients above.
pub fn t_general(p: &CostParams) -> Result<f64, AnalysisError> {
    let coeffs = coeffs_general(p)?;
    Ok(t_general_with(&coeffs, p.n))
}

pub fn t_general_with(coeffs: &Coeffs, n: f64) -> f64 {
    if n <= 0.0 {
        0.0
    } else if n == 1.0 {
        1.0
    } else {
        coeffs.c1 * n + coeffs.c2 * n * n.ln()
    }
}

/// Smallest n above which the general case beats n·ln n. Infinite when the
/// linearithmic coefficient reaches 1.
pub fn break_even_n(p: &CostParams) -> Result<f64, AnalysisError> {
    let coeffs = coeffs_general(p)?;
    Ok(break_even_with(&coeffs))
}

pub fn break_even_with(coeffs: &Coeffs) -> f64 {
    if coeffs.c2 >= 1.0 {
        f64::INFINITY
    } else {
        (coeffs.c1 / (1.0 - coeffs.c2)).exp()
    }
}

fn validate(p: &CostParams) -> Result<(), AnalysisError> {
    if !(0.0..1.0).contains(&p.sigma) {
        return Err(AnalysisError::BadSigma(p.sigma));
    }
    if !(0.0..=1.0).contains(&p.e) {
        return Err(AnalysisError::BadMisorderRate(p.e));
    }
    if p.t == 0 {
        return Err(AnalysisError::BadIterations);
    }
    if !(p.theta >= 0.0 && p.theta.is_finite()) {
        return Err(AnalysisError::BadTheta(p.theta));
    }
    Ok(())
}

/// Measured-versus-predicted summary for one instrumented run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReconcileReport {
    pub n: usize,
    pub theta: f64,
    /// Geometric mean of the per-iteration conflict rates.
    pub sigma: f64,
    /// Mean per-iteration mis-order rate.
    pub e: f64,
    pub t: usize,
    pub measured_ops: f64,
    pub predicted_general: f64,
    pub predicted_best: f64,
    pub predicted_worst: f64,
    /// measured / predicted_general
    pub ratio_general: f64,
    pub ratio_best: f64,
    pub ratio_worst: f64,
}

/// Extracts cost-model parameters from a completed run and compares the
/// measured operation total against the formulas.
pub fn reconcile(runset: &RunSet, theta: f64) -> ReconcileReport {
    let n = runset.input_len;
    let t = runset.iterations();
    let sigma = geometric_mean(runset.metrics.iter().map(|m| m.sigma));
    let e = mean(runset.metrics.iter().map(|m| m.out_of_order_rate));
    let measured = runset.counters.total_ops(theta);

    let nf = n as f64;
    let predicted_general = if t >= 1 {
        let p = CostParams {
            n: nf,
            theta,
            // clamp away from the excluded sigma = 1 endpoint
            sigma: sigma.min(1.0 - 1e-12),
            e: e.min(1.0),
            t: t as u32,
            epsilon: runset.config.epsilon() as u32,
        };
        t_general(&p).unwrap_or(f64::NAN)
    } else {
        // Bypass run: the model never fired, everything was quicksorted.
        if nf > 1.0 {
            nf * nf.ln()
        } else {
            nf.max(0.0)
        }
    };
    let predicted_best = t_best(nf, theta);
    let predicted_worst = t_worst(nf, theta, runset.config.epsilon() as u32);

    ReconcileReport {
        n,
        theta,
        sigma,
        e,
        t,
        measured_ops: measured,
        predicted_general,
        predicted_best,
        predicted_worst,
        ratio_general: measured / predicted_general,
        ratio_best: measured / predicted_best,
        ratio_worst: measured / predicted_worst,
    }
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

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut count = 0usize;
    for v in values {
        sum += v;
        count += 1;
    }
    if count == 0 {
        0.0
    } else {
        sum / count as f64
    }
}
