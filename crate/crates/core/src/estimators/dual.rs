use super::intercept::center_for_intercept;
use super::{check_xy, BridgeConfig, CoefficientSet, DualPower, MethodTag};
use crate::error::{Error, Result};
use crate::linalg::{abs_pow_mat, solve, solve_regularized, Mat};

/// Proximal bridge estimate for under-determined designs (`M < D`).
///
/// With `W = |Xᵀ|^(1/(k-1))` (or `Xᵀ` when `k = 2`) and `ρ` the dual shift:
/// `θ = W (XW + ρI)⁻¹ y`, `u = Xᵀ(XXᵀ + ρI)⁻¹ X θ^(k-1)`,
/// `α = sgn(θ) |u|^(1/(k-1))`.
///
/// `ρ` defaults to `lambda`, so here `lambda` acts as a conditioning shift
/// on both inverses rather than as the Lagrangian weight of the primal form.
pub fn fit_pbridge_dual(x: &Mat, y: &Mat, cfg: &BridgeConfig) -> Result<CoefficientSet> {
    check_xy(x, y)?;
    cfg.validate()?;
    if !(cfg.k > 1.0) {
        return Err(Error::InvalidK {
            k: cfg.k,
            reason: "the dual solver requires k > 1",
        });
    }
    if x.rows() >= x.cols() {
        return Err(Error::DimensionMismatch(format!(
            "dual solver needs rows < cols, got {}x{}",
            x.rows(),
            x.cols()
        )));
    }
    let coeffs = if cfg.penalize_intercept {
        dual_coefficients(x, y, cfg)?
    } else {
        let c = center_for_intercept(x, y)?;
        c.restore(&dual_coefficients(&c.x, &c.y, cfg)?)
    };
    Ok(CoefficientSet::new(coeffs, MethodTag::PbridgeDual, cfg.clone()))
}

fn dual_coefficients(x: &Mat, y: &Mat, cfg: &BridgeConfig) -> Result<Mat> {
    let rho = cfg.dual_rho();
    let p = cfg.k - 1.0;
    let xt = x.transpose();
    let w = if cfg.k == 2.0 {
        xt.clone()
    } else {
        abs_pow_mat(&xt, 1.0 / p)
    };
    if !w.is_finite() {
        return Err(Error::NonFinite("dual weight matrix"));
    }
    let mut xw = x.mul(&w);
    xw.add_scaled_identity(rho);
    // XW is not symmetric for k != 2.
    let theta = w.mul(&solve(&xw, y)?);
    let h = x.outer_gram();

    let mut out = Mat::zeros(x.cols(), y.cols());
    for l in 0..y.cols() {
        let th = theta.col(l);
        let (re, im) = power(&th, p, cfg.dual_power);
        let rhs = x.mul(&Mat::from_columns(&[re, im])?);
        let u = x.t_mul(&solve_regularized(&h, rho, &rhs)?);
        let alpha: Vec<f64> = th
            .iter()
            .enumerate()
            .map(|(j, t)| {
                let modulus = u[(j, 0)].hypot(u[(j, 1)]);
                sign(*t) * modulus.powf(1.0 / p)
            })
            .collect();
        if alpha.iter().any(|a| !a.is_finite()) {
            return Err(Error::NonFinite("dual solver"));
        }
        out.set_col(l, &alpha);
    }
    Ok(out)
}

fn sign(t: f64) -> f64 {
    if t > 0.0 {
        1.0
    } else if t < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// `θ^p` split into real and imaginary parts.
fn power(theta: &[f64], p: f64, mode: DualPower) -> (Vec<f64>, Vec<f64>) {
    let mut re = Vec::with_capacity(theta.len());
    let mut im = Vec::with_capacity(theta.len());
    for &t in theta {
        let (r, i) = if t >= 0.0 || p == 1.0 {
            (if t == 0.0 { 0.0 } else { t.signum() * t.abs().powf(p) }, 0.0)
        } else {
            let m = (-t).powf(p);
            match mode {
                DualPower::Signed => (-m, 0.0),
                DualPower::Principal => {
                    let phase = std::f64::consts::PI * p;
                    (m * phase.cos(), m * phase.sin())
                }
            }
        };
        re.push(r);
        im.push(i);
    }
    (re, im)
}
