use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{solve_regularized, Mat};

/// Parameter error weighted by the test design:
/// `(â − a)ᵀ (XᵀX / n) (â − a) = ‖X(â − a)‖² / n`.
pub fn weighted_mse(alpha_hat: &[f64], alpha_true: &[f64], x_test: &Mat) -> f64 {
    assert_eq!(alpha_hat.len(), alpha_true.len(), "coefficient lengths differ");
    assert_eq!(x_test.cols(), alpha_hat.len(), "design width differs from coefficients");
    let diff: Vec<f64> = alpha_hat.iter().zip(alpha_true).map(|(a, b)| a - b).collect();
    let r = x_test.mul_vec(&diff);
    r.iter().map(|v| v * v).sum::<f64>() / x_test.rows() as f64
}

/// Mean squared residual over every entry.
pub fn prediction_mse(y_hat: &Mat, y: &Mat) -> f64 {
    assert_eq!(y_hat.shape(), y.shape(), "prediction shape mismatch");
    let n = y.as_slice().len() as f64;
    y_hat
        .as_slice()
        .iter()
        .zip(y.as_slice())
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        / n
}

/// Index of the largest score per row; the lowest index wins ties.
pub fn winner_take_all(scores: &Mat) -> Vec<usize> {
    (0..scores.rows())
        .map(|i| {
            let row = scores.row(i);
            let mut best = 0;
            for (j, v) in row.iter().enumerate().skip(1) {
                if *v > row[best] {
                    best = j;
                }
            }
            best
        })
        .collect()
}

/// Fraction of rows whose winner-take-all class equals the label.
pub fn accuracy_wta(scores: &Mat, labels: &[usize]) -> Result<f64> {
    if scores.rows() != labels.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} score rows but {} labels",
            scores.rows(),
            labels.len()
        )));
    }
    if scores.cols() < 2 {
        return Err(Error::InvalidParameter("winner-take-all needs at least two classes".into()));
    }
    let hits = winner_take_all(scores)
        .iter()
        .zip(labels)
        .filter(|(p, l)| p == l)
        .count();
    Ok(hits as f64 / labels.len() as f64)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Selection {
    pub count: usize,
    pub indices: Vec<usize>,
}

/// Default magnitude below which a coefficient counts as zero.
pub const DEFAULT_NONZERO_TOL: f64 = 1e-3;

/// Indices with `|a_j| >= tol`.
pub fn count_nonzero(alpha: &[f64], tol: f64) -> Selection {
    let indices: Vec<usize> = alpha
        .iter()
        .enumerate()
        .filter(|(_, a)| a.abs() >= tol)
        .map(|(j, _)| j)
        .collect();
    Selection {
        count: indices.len(),
        indices,
    }
}

/// Trace of the ridge hat matrix, `tr[X(XᵀX + λI)⁻¹Xᵀ]`, evaluated through
/// whichever Gram matrix is smaller.
pub fn effective_df(x: &Mat, lambda: f64) -> Result<f64> {
    if !(lambda >= 0.0) {
        return Err(Error::InvalidParameter(format!("lambda must be nonnegative, got {lambda}")));
    }
    let g = if x.rows() >= x.cols() { x.gram() } else { x.outer_gram() };
    Ok(solve_regularized(&g, lambda, &g)?.trace())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weighted_mse_examples() {
        let x = Mat::identity(2);
        assert_eq!(weighted_mse(&[1.0, 2.0], &[1.0, 2.0], &x), 0.0);
        let x = Mat::from_rows(&[[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]])
            .unwrap()
            .scale(2.0_f64.sqrt());
        assert!((weighted_mse(&[3.0, 4.0], &[0.0, 0.0], &x) - 25.0).abs() < 1e-12);
    }

    #[test]
    fn prediction_mse_examples() {
        let y = Mat::column(&[1.0, 2.0, 3.0, 4.0, 5.0]);
        assert_eq!(prediction_mse(&y, &y), 0.0);
        assert_eq!(prediction_mse(&y.map(|v| v + 1.0), &y), 1.0);
    }

    #[test]
    fn wta_ties_go_to_lowest_index() {
        let scores = Mat::zeros(3, 4);
        assert_eq!(accuracy_wta(&scores, &[0, 0, 0]).unwrap(), 1.0);
        let scores = Mat::from_rows(&[[0.1, 0.9], [0.7, 0.2]]).unwrap();
        assert_eq!(accuracy_wta(&scores, &[1, 1]).unwrap(), 0.5);
        assert!(accuracy_wta(&Mat::zeros(2, 1), &[0, 0]).is_err());
    }

    #[test]
    fn nonzero_counting() {
        let s = count_nonzero(&[0.0, -0.05, 0.0004, 0.054, -0.001], DEFAULT_NONZERO_TOL);
        assert_eq!(s.indices, vec![1, 3, 4]);
        assert_eq!(count_nonzero(&[0.0; 4], 1e-3).count, 0);
    }

    #[test]
    fn df_examples() {
        assert!((effective_df(&Mat::identity(4), 1.0).unwrap() - 2.0).abs() < 1e-12);
        let x = Mat::from_fn(20, 8, |i, j| ((i * 3 + j * 7) % 11) as f64 + if i == j { 3.0 } else { 0.0 });
        assert!((effective_df(&x, 0.0).unwrap() - 8.0).abs() < 1e-8);
        let mut last = 8.0;
        for lambda in [0.1, 1.0, 10.0, 1e3, 1e6] {
            let df = effective_df(&x, lambda).unwrap();
            assert!(df < last && df > 0.0);
            last = df;
        }
        assert!(last < 1e-2);
    }
}
