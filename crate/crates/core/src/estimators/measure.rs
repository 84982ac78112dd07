use crate::linalg::Mat;

/// Smooth surrogate of the `l_k` norm: `(Σ (a_j² + eps)^{k/2})^{1/k}`.
pub fn k_measure(alpha: &[f64], k: f64, eps: f64) -> f64 {
    k_measure_pow(alpha, k, eps).powf(1.0 / k)
}

/// The k-th power of [`k_measure`], i.e. the penalty itself.
pub(crate) fn k_measure_pow(alpha: &[f64], k: f64, eps: f64) -> f64 {
    alpha.iter().map(|a| (a * a + eps).powf(0.5 * k)).sum()
}

/// Residual sum of squares plus `lambda * k_measure^k`.
pub fn bridge_objective(x: &Mat, y: &[f64], alpha: &[f64], lambda: f64, k: f64, eps: f64) -> f64 {
    let fitted = x.mul_vec(alpha);
    let rss: f64 = fitted.iter().zip(y).map(|(f, t)| (t - f) * (t - f)).sum();
    rss + lambda * k_measure_pow(alpha, k, eps)
}
