use super::{check_xy, BridgeConfig, CoefficientSet, MethodTag};
use crate::error::{Error, Result};
use crate::linalg::{solve_regularized, Mat};

/// Least squares in primal form `(XᵀX)⁻¹XᵀY` when `M >= D`, otherwise the
/// least-norm interpolant `Xᵀ(XXᵀ)⁻¹Y`.
pub fn fit_ols(x: &Mat, y: &Mat) -> Result<CoefficientSet> {
    let coeffs = ridge_coefficients(x, y, 0.0)?;
    Ok(CoefficientSet::new(
        coeffs,
        MethodTag::Ols,
        BridgeConfig::new(2.0, 0.0),
    ))
}

/// Ridge regression; dual form `Xᵀ(XXᵀ + λI)⁻¹Y` for wide designs.
pub fn fit_ridge(x: &Mat, y: &Mat, lambda: f64) -> Result<CoefficientSet> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "ridge lambda must be finite and nonnegative, got {lambda}"
        )));
    }
    let coeffs = ridge_coefficients(x, y, lambda)?;
    Ok(CoefficientSet::new(
        coeffs,
        MethodTag::Ridge,
        BridgeConfig::new(2.0, lambda),
    ))
}

pub(crate) fn ridge_coefficients(x: &Mat, y: &Mat, lambda: f64) -> Result<Mat> {
    check_xy(x, y)?;
    if x.rows() >= x.cols() {
        solve_regularized(&x.gram(), lambda, &x.t_mul(y))
    } else {
        let inner = solve_regularized(&x.outer_gram(), lambda, y)?;
        Ok(x.t_mul(&inner))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_design_echoes_targets() {
        let y = Mat::column(&[1.5, -2.0, 3.0]);
        let fit = fit_ols(&Mat::identity(3), &y).unwrap();
        assert_eq!(fit.coeffs, y);
    }

    #[test]
    fn ridge_on_identity() {
        let fit = fit_ridge(&Mat::identity(2), &Mat::column(&[2.0, 4.0]), 1.0).unwrap();
        assert!((fit.coeffs[(0, 0)] - 1.0).abs() < 1e-15);
        assert!((fit.coeffs[(1, 0)] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn ridge_at_zero_is_ols() {
        let x = Mat::from_fn(7, 3, |i, j| ((i + 2 * j) % 5) as f64 + 0.3 * j as f64);
        let y = Mat::column(&[1.0, 2.0, 0.5, -1.0, 3.0, 2.2, 0.1]);
        let a = fit_ols(&x, &y).unwrap().coeffs;
        let b = fit_ridge(&x, &y, 0.0).unwrap().coeffs;
        assert!(a.sub(&b).max_abs() < 1e-10);
    }

    #[test]
    fn least_norm_interpolates() {
        let x = Mat::from_fn(3, 6, |i, j| ((i * 5 + j * 2) % 7) as f64 - 2.5);
        let y = Mat::column(&[1.0, -1.0, 0.5]);
        let a = fit_ols(&x, &y).unwrap().coeffs;
        assert!(x.mul(&a).sub(&y).max_abs() < 1e-10);
    }

    #[test]
    fn singular_gram_is_reported() {
        let x = Mat::from_rows(&[[1.0, 2.0], [2.0, 4.0], [3.0, 6.0]]).unwrap();
        let y = Mat::column(&[1.0, 2.0, 3.0]);
        assert!(matches!(fit_ols(&x, &y), Err(Error::SingularSystem)));
        assert!(fit_ridge(&x, &y, 0.1).is_ok());
        assert!(fit_ridge(&x, &y, -0.1).is_err());
    }
}
