use super::intercept::center_for_intercept;
use super::{check_xy, BridgeConfig, CoefficientSet, MethodTag};
use crate::error::{Error, Result};
use crate::linalg::{solve_regularized, Mat};

/// Cached `XᵀX` and `XᵀY` for repeated primal fits over a hyperparameter
/// grid. Only valid for designs with `M >= D`.
#[derive(Clone, Debug)]
pub struct GramSystem {
    gram: Mat,
    xty: Mat,
}

impl GramSystem {
    pub fn new(x: &Mat, y: &Mat) -> Result<Self> {
        check_xy(x, y)?;
        Ok(Self {
            gram: x.gram(),
            xty: x.t_mul(y),
        })
    }

    pub fn n_features(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &Mat {
        &self.gram
    }

    pub fn xty(&self) -> &Mat {
        &self.xty
    }

    /// Primal fixed point on the cached system. Intercept handling is the
    /// caller's job; `penalize_intercept` is ignored here.
    pub fn solve(&self, cfg: &BridgeConfig) -> Result<Mat> {
        cfg.validate()?;
        if cfg.k < 1.0 {
            return Err(Error::InvalidK {
                k: cfg.k,
                reason: "the primal solver requires k >= 1",
            });
        }
        let d = self.n_features();
        let rho = cfg.primal_rho();
        let mut out = solve_regularized(&self.gram, cfg.lambda, &self.xty)?;
        if !out.is_finite() {
            return Err(Error::DivergedFixedPoint { step: 0 });
        }
        // k = 2 is a fixed point of the ridge start; λ = 0 makes every
        // refinement an OLS solve.
        if cfg.k == 2.0 || cfg.lambda == 0.0 {
            return Ok(out);
        }
        let scale = 0.5 * cfg.lambda * cfg.k;
        for l in 0..self.xty.cols() {
            let b = Mat::column(&self.xty.col(l));
            let mut alpha = out.col(l);
            for step in 1..=cfg.refine_iters {
                let diag: Vec<f64> = alpha
                    .iter()
                    .map(|a| scale * (a.abs() + cfg.jitter).powf(cfg.k - 2.0))
                    .collect();
                let mut a = self.gram.clone();
                a.add_to_diag(&diag);
                let next = solve_regularized(&a, rho, &b)?;
                if !next.is_finite() {
                    return Err(Error::DivergedFixedPoint { step });
                }
                alpha = next.into_vec();
                debug_assert_eq!(alpha.len(), d);
            }
            out.set_col(l, &alpha);
        }
        Ok(out)
    }
}

/// Proximal bridge estimate for over-determined (or square) designs.
///
/// Starts from the ridge solution with the same `lambda` and applies
/// `refine_iters` reweighted solves of
/// `(λk/2 diag((|α|+jitter)^(k-2)) + XᵀX + ρI) α = Xᵀy`.
/// Output columns are fitted independently.
pub fn fit_pbridge_primal(x: &Mat, y: &Mat, cfg: &BridgeConfig) -> Result<CoefficientSet> {
    check_xy(x, y)?;
    if x.rows() < x.cols() {
        return Err(Error::DimensionMismatch(format!(
            "primal solver needs rows >= cols, got {}x{}",
            x.rows(),
            x.cols()
        )));
    }
    let coeffs = if cfg.penalize_intercept {
        GramSystem::new(x, y)?.solve(cfg)?
    } else {
        let c = center_for_intercept(x, y)?;
        c.restore(&GramSystem::new(&c.x, &c.y)?.solve(cfg)?)
    };
    Ok(CoefficientSet::new(
        coeffs,
        MethodTag::PbridgePrimal,
        cfg.clone(),
    ))
}
