//! Metrics, hyperparameter search, coefficient paths, Monte-Carlo
//! benchmarks and the empirical bias check.

mod bench;
mod bias;
mod cv;
mod fitting;
mod grid;
pub mod json;
mod metrics;
mod path;

pub use bench::{
    bootstrap_se, median, monte_carlo_bench, monte_carlo_bench_spec, prostate_bench, standard_methods, xor_bench,
    xor_methods, BenchGrids, BenchReport, MethodReport, TrialOutcome, BOOTSTRAP_RESAMPLES, MIN_COMPLETION,
};
pub use bias::{empirical_bias, BiasReport};
pub use cv::{cross_validate, fold_assignment, CvReport};
pub use fitting::{fit_tuples, select_best, Hyper, Method, ParamGrid};
pub use grid::{
    paper_k_grid, paper_l1_ratio_grid, paper_lambda_grid, parse_grid, parse_ranges, Grid, PAPER_K_GRID,
    PAPER_L1_RATIO_GRID, PAPER_LAMBDA_GRID,
};
pub use metrics::{
    accuracy_wta, count_nonzero, effective_df, prediction_mse, weighted_mse, winner_take_all, Selection,
    DEFAULT_NONZERO_TOL,
};
pub use path::{coefficient_path, PathPoint, PathTrace, SweepAxis};
