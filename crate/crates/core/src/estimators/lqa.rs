use super::{check_xy, BridgeConfig, CoefficientSet, MethodTag, DEFAULT_JITTER};
use crate::error::{Error, Result};
use crate::linalg::{solve_regularized, Mat};

/// Local quadratic approximation of the `l_q` penalty: starting from ridge,
/// repeatedly solves `(λq/2 diag(|α₀|^(q-2)) + XᵀX) α = Xᵀy`, where `α₀` is
/// the previous iterate with magnitudes floored at `1e-10`.
pub fn fit_lqa(x: &Mat, y: &Mat, lambda: f64, q: f64, iters: usize) -> Result<CoefficientSet> {
    check_xy(x, y)?;
    if x.rows() < x.cols() {
        return Err(Error::DimensionMismatch(format!(
            "LQA needs rows >= cols, got {}x{}",
            x.rows(),
            x.cols()
        )));
    }
    if !(q >= 1.0) || !q.is_finite() {
        return Err(Error::InvalidK {
            k: q,
            reason: "LQA requires q >= 1",
        });
    }
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "lambda must be finite and nonnegative, got {lambda}"
        )));
    }
    let g = x.gram();
    let xty = x.t_mul(y);
    let mut out = solve_regularized(&g, lambda, &xty)?;
    for l in 0..y.cols() {
        let b = Mat::column(&xty.col(l));
        let mut alpha = out.col(l);
        for step in 1..=iters {
            let mut a = g.clone();
            let diag: Vec<f64> = alpha
                .iter()
                .map(|v| 0.5 * lambda * q * v.abs().max(DEFAULT_JITTER).powf(q - 2.0))
                .collect();
            a.add_to_diag(&diag);
            let next = solve_regularized(&a, 0.0, &b)?;
            if !next.is_finite() {
                return Err(Error::DivergedFixedPoint { step });
            }
            alpha = next.into_vec();
        }
        out.set_col(l, &alpha);
    }
    let config = BridgeConfig::new(q, lambda).with_refine_iters(iters);
    Ok(CoefficientSet::new(out, MethodTag::Lqa, config))
}
