//! Penalized linear regression with closed-form bridge estimators.
//!
//! The crate provides a small dense linear-algebra kernel, OLS/ridge and
//! proximal bridge solvers in primal and dual form, coordinate-descent
//! lasso/elastic-net baselines, dataset generators and loaders, and an
//! evaluation harness for coefficient paths, cross-validation and Monte-Carlo
//! benchmarks.

// `!(x >= 0.0)` is the NaN-rejecting form used throughout for validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod baselines;
pub mod datasets;
pub mod error;
pub mod estimators;
pub mod evaluation;
pub mod linalg;

pub use error::{Error, Result};
pub use linalg::Mat;
