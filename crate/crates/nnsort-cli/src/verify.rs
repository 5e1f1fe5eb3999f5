//! Output self-checks: every path that claims "sorted" re-verifies
//! sortedness and multiset equality before reporting success. The multiset
//! check is a count/sum/min/max checksum, plus a full element-wise
//! comparison against a mergesort oracle for inputs up to the oracle cap.

use nnsort::baselines::mergesort;
use nnsort::types::{Key, OpCounters};

pub const ORACLE_CAP: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Checksum {
    pub count: usize,
    pub sum: f64,
    pub min: Option<f64>,
    pub max: Option<f64>,
}

/// Order-insensitive summary of a key multiset. The sum uses Neumaier
/// compensation so permutations agree to fine tolerance.
pub fn checksum(keys: &[Key]) -> Checksum {
    let mut sum = 0.0f64;
    let mut compensation = 0.0f64;
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for k in keys {
        let v = k.value();
        let t = sum + v;
        if sum.abs() >= v.abs() {
            compensation += (sum - t) + v;
        } else {
            compensation += (v - t) + sum;
        }
        sum = t;
        min = min.min(v);
        max = max.max(v);
    }
    Checksum {
        count: keys.len(),
        sum: sum + compensation,
        min: (!keys.is_empty()).then_some(min),
        max: (!keys.is_empty()).then_some(max),
    }
}

/// Verifies `output` is a sorted permutation of `input`. Returns a
/// description of the first violated property.
pub fn verify_sorted_permutation(input: &[Key], output: &[Key]) -> Result<(), String> {
    if output.len() != input.len() {
        return Err(format!("length changed: {} in, {} out", input.len(), output.len()));
    }
    if let Some(w) = output.windows(2).find(|w| w[0] > w[1]) {
        return Err(format!("output not sorted: {} precedes {}", w[0], w[1]));
    }
    let a = checksum(input);
    let b = checksum(output);
    if a.count != b.count || a.min != b.min || a.max != b.max {
        return Err("checksum mismatch between input and output".into());
    }
    let scale = a.sum.abs().max(b.sum.abs()).max(1.0);
    if (a.sum - b.sum).abs() / scale > 1e-9 {
        return Err(format!("sum checksum drifted: {} vs {}", a.sum, b.sum));
    }
    if input.len() <= ORACLE_CAP {
        let mut oracle = input.to_vec();
        let mut scratch = OpCounters::default();
        mergesort(&mut oracle, &mut scratch);
        if oracle != output {
            return Err("output disagrees with the mergesort oracle".into());
        }
    }
    Ok(())
}
