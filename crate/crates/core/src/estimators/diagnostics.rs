use super::DEFAULT_JITTER;
use crate::error::Result;
use crate::linalg::{min_eigenvalue, norm_inf, Mat};

/// Sufficient condition for the primal system matrix to stay invertible:
/// `λk/2 · max_j max(|α_j|, jitter)^(k-2) < λ_min(XᵀX)`.
pub fn check_invertibility_condition(x: &Mat, alpha: &[f64], lambda: f64, k: f64) -> Result<bool> {
    let lhs = alpha
        .iter()
        .map(|a| a.abs().max(DEFAULT_JITTER).powf(k - 2.0))
        .fold(0.0_f64, f64::max)
        * 0.5
        * lambda
        * k;
    Ok(lhs < min_eigenvalue(&x.gram())?)
}

/// Sup-norm residual of the stationarity system
/// `(λk/2 diag((|α|+jitter)^(k-2)) + XᵀX) α = Xᵀy`.
pub fn stationarity_residual(x: &Mat, y: &[f64], alpha: &[f64], lambda: f64, k: f64) -> f64 {
    let g = x.gram();
    let xty = x.t_mul_vec(y);
    let mut r = g.mul_vec(alpha);
    for (j, rj) in r.iter_mut().enumerate() {
        let a = alpha[j];
        *rj += 0.5 * lambda * k * (a.abs() + DEFAULT_JITTER).powf(k - 2.0) * a - xty[j];
    }
    norm_inf(&r)
}
