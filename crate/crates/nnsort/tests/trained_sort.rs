//! End-to-end runs with a genuinely trained model, checked against the
//! standard-library sort and reconciled with the cost formulas.

use nnsort::analysis::{reconcile, DEFAULT_THETA};
use nnsort::baselines::single_pass_learned_sort;
use nnsort::datagen::{generate, Distribution};
use nnsort::model::{train, TrainConfig};
use nnsort::sort::nn_sort;
use nnsort::types::{keys_to_raw, SortConfig};
use nnsort::{ConstantPredictor, OracleRank};

#[test]
fn trained_model_sorts_lognormal_keys_exactly() {
    let training = generate(Distribution::standard_lognormal(), 50_000, 1).unwrap();
    let cfg = TrainConfig { epochs: 15, batch_size: 512, rng_seed: 4, ..Default::default() };
    let model = train(&training, &cfg).unwrap().model;

    let input = generate(Distribution::standard_lognormal(), 100_000, 2).unwrap();
    let sort_cfg = SortConfig::new(2.0, 1000, 3).unwrap();
    let (output, rs) = nn_sort(&input, &model, &sort_cfg);

    // Trusted library sort as the oracle.
    let mut expected = keys_to_raw(&input);
    expected.sort_by(f64::total_cmp);
    assert_eq!(keys_to_raw(&output), expected);
    assert!(rs.iterations() >= 1 && rs.iterations() <= 3);
}

#[test]
fn oracle_run_reconciles_near_the_best_case() {
    let input = generate(Distribution::uniform01(), 10_000, 33).unwrap();
    let oracle = OracleRank::new(input.clone());
    let cfg = SortConfig::new(2.0, 1000, 3).unwrap();
    let (_, rs) = nn_sort(&input, &oracle, &cfg);
    assert_eq!(rs.iterations(), 1);
    assert_eq!(rs.metrics[0].sigma, 0.0);

    let report = reconcile(&rs, DEFAULT_THETA);
    assert!(
        report.ratio_best >= 0.5 && report.ratio_best <= 2.0,
        "measured / t_best = {}",
        report.ratio_best
    );
}

#[test]
fn constant_run_reconciles_near_the_worst_case() {
    let input = generate(Distribution::uniform01(), 10_000, 34).unwrap();
    let cfg = SortConfig::new(2.0, 1000, 3).unwrap();
    let (_, rs) = nn_sort(&input, &ConstantPredictor::new(0.5), &cfg);
    assert_eq!(rs.iterations(), 3);

    let report = reconcile(&rs, DEFAULT_THETA);
    assert!(
        report.ratio_worst >= 0.5 && report.ratio_worst <= 2.0,
        "measured / t_worst = {}",
        report.ratio_worst
    );
}

#[test]
fn iterating_beats_the_single_pass_on_conflicts() {
    let training = generate(Distribution::standard_lognormal(), 50_000, 10).unwrap();
    let cfg = TrainConfig { epochs: 15, batch_size: 512, rng_seed: 6, ..Default::default() };
    let model = train(&training, &cfg).unwrap().model;

    let input = generate(Distribution::standard_lognormal(), 100_000, 11).unwrap();
    let (_, single_rate, _) = single_pass_learned_sort(&input, &model, 2.0);

    let sort_cfg = SortConfig::new(2.0, 1000, 3).unwrap();
    let (_, rs) = nn_sort(&input, &model, &sort_cfg);
    let fallback = rs.fallback_fraction();
    assert!(
        fallback < single_rate,
        "iterative fallback fraction {fallback} should be under the single-pass conflict rate {single_rate}"
    );
}
