//! Model-guided sorting with instrumented cost accounting.
//!
//! A small regression network (or a synthetic predictor) estimates each
//! key's position in the sorted order. The sort maps keys into a relaxed
//! slot array over a few conflict-resolving iterations, quicksorts whatever
//! keeps colliding, and polishes the roughly-ordered runs into an exactly
//! sorted result. Every phase counts its comparisons, moves, and model
//! invocations so measured work can be reconciled against the closed-form
//! cost model in [`analysis`].

pub mod analysis;
pub mod baselines;
pub mod datagen;
pub mod dataset;
pub mod model;
pub mod polish;
pub mod rng;
pub mod sort;
pub mod types;

pub use analysis::{break_even_n, coeffs_general, reconcile, t_best, t_general, t_worst, CostParams, DEFAULT_THETA};
pub use model::{
    huber_grad, huber_loss, load_model, save_model, train, ConstantPredictor, MlpModel,
    OracleRank, Predictor, SeededRandomPredictor, TrainConfig,
};
pub use sort::{map_iteration, nn_sort, nn_sort_timed, phase_breakdown, position, RunSet};
pub use types::{
    normalize, validate_keys, IterationMetrics, Key, KeyError, OpCounters, SortConfig,
};
