use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fitting::{fit_tuples, select_best, Hyper, Method, ParamGrid};
use super::metrics::prediction_mse;
use crate::datasets::{trial_rng, Dataset};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CvReport {
    pub method: String,
    pub folds: usize,
    pub seed: u64,
    /// Tuples that fitted on every fold.
    pub grid: Vec<Hyper>,
    /// Mean validation MSE per tuple of `grid`.
    pub cv_scores: Vec<f64>,
    pub best: Hyper,
    pub best_score: f64,
    /// Tuples dropped because some fold failed to fit.
    pub failed: Vec<Hyper>,
}

/// Validation indices per fold: a seeded shuffle cut into contiguous blocks
/// whose sizes differ by at most one.
pub fn fold_assignment(samples: usize, folds: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if folds < 2 || samples < folds {
        return Err(Error::FoldTooSmall { samples, folds });
    }
    let mut idx: Vec<usize> = (0..samples).collect();
    idx.shuffle(&mut trial_rng(seed, 0));
    let base = samples / folds;
    let extra = samples % folds;
    let mut out = Vec::with_capacity(folds);
    let mut start = 0;
    for f in 0..folds {
        let len = base + usize::from(f < extra);
        out.push(idx[start..start + len].to_vec());
        start += len;
    }
    Ok(out)
}

/// K-fold cross-validation of `method` over every tuple of `grid`.
pub fn cross_validate(ds: &Dataset, method: &Method, grid: &ParamGrid, folds: usize, seed: u64) -> Result<CvReport> {
    let assignment = fold_assignment(ds.n_samples(), folds, seed)?;
    let tuples = method.tuples(grid);
    if tuples.is_empty() {
        return Err(Error::InvalidGrid("no hyperparameter tuples".into()));
    }
    let per_fold: Vec<Vec<f64>> = assignment
        .par_iter()
        .map(|valid| {
            let mut in_valid = vec![false; ds.n_samples()];
            for &i in valid {
                in_valid[i] = true;
            }
            let train_idx: Vec<usize> = (0..ds.n_samples()).filter(|&i| !in_valid[i]).collect();
            let train = ds.select_rows(&train_idx);
            let held = ds.select_rows(valid);
            fit_tuples(method, &train.x, &train.y, &tuples)
                .into_iter()
                .map(|fit| match fit {
                    Ok(coeffs) if coeffs.is_finite() => prediction_mse(&held.x.mul(&coeffs), &held.y),
                    _ => f64::NAN,
                })
                .collect()
        })
        .collect();

    let mut grid_ok = Vec::new();
    let mut scores = Vec::new();
    let mut failed = Vec::new();
    for (t, tuple) in tuples.iter().enumerate() {
        let fold_scores: Vec<f64> = per_fold.iter().map(|s| s[t]).collect();
        if fold_scores.iter().all(|s| s.is_finite()) {
            grid_ok.push(*tuple);
            scores.push(fold_scores.iter().sum::<f64>() / folds as f64);
        } else {
            failed.push(*tuple);
        }
    }
    let best = select_best(&grid_ok, &scores)
        .ok_or_else(|| Error::TooManyFailures(format!("every {method} tuple failed on some fold")))?;
    Ok(CvReport {
        method: method.name().to_string(),
        folds,
        seed,
        best: grid_ok[best],
        best_score: scores[best],
        grid: grid_ok,
        cv_scores: scores,
        failed,
    })
}
