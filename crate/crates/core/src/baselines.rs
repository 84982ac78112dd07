//! Cyclic coordinate-descent lasso and elastic net.
//!
//! Minimizes `(1/2M)‖y − Xα‖² + s·(r‖α‖₁ + (1−r)/2·‖α‖²)` with `s` the
//! overall strength and `r` the l1 ratio. Coordinates are visited in index
//! order, so results are deterministic.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::{check_xy, BridgeConfig, CoefficientSet, MethodTag};
use crate::linalg::Mat;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnetConfig {
    pub alpha_strength: f64,
    pub l1_ratio: f64,
    pub max_iters: usize,
    pub tol: f64,
    /// Column 0 of the design is the all-ones intercept column; it is left
    /// unpenalized and the other columns are centered.
    pub fit_intercept: bool,
    /// Scale predictors to unit population standard deviation (root mean
    /// square without an intercept) before fitting; coefficients are
    /// reported on the original scale.
    pub standardize: bool,
}

impl Default for EnetConfig {
    fn default() -> Self {
        Self {
            alpha_strength: 1.0,
            l1_ratio: 0.5,
            max_iters: 10_000,
            tol: 1e-7,
            fit_intercept: false,
            standardize: false,
        }
    }
}

impl EnetConfig {
    pub fn new(alpha_strength: f64, l1_ratio: f64) -> Self {
        Self {
            alpha_strength,
            l1_ratio,
            ..Self::default()
        }
    }

    pub fn lasso(alpha_strength: f64) -> Self {
        Self::new(alpha_strength, 1.0)
    }

    pub fn with_intercept(mut self, fit: bool) -> Self {
        self.fit_intercept = fit;
        self
    }

    pub fn with_standardize(mut self, standardize: bool) -> Self {
        self.standardize = standardize;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_max_iters(mut self, iters: usize) -> Self {
        self.max_iters = iters;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.alpha_strength >= 0.0) || !self.alpha_strength.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "alpha_strength must be finite and nonnegative, got {}",
                self.alpha_strength
            )));
        }
        if !(0.0..=1.0).contains(&self.l1_ratio) {
            return Err(Error::InvalidParameter(format!(
                "l1_ratio must lie in [0, 1], got {}",
                self.l1_ratio
            )));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "tol must be positive, got {}",
                self.tol
            )));
        }
        Ok(())
    }
}

/// Result of one coordinate-descent solve.
#[derive(Clone, Debug)]
pub struct EnetFit {
    /// Coefficients on the original scale, intercept first when fitted.
    pub coeffs: Vec<f64>,
    /// Coefficients on the internal (centered, scaled) problem; pass back as
    /// a warm start.
    pub inner: Vec<f64>,
    pub converged: bool,
    pub sweeps: usize,
}

/// Single-output problem in covariance form: `G = XᵀX/M` and `c = Xᵀy/M` on
/// the preprocessed predictors are computed once and reused across strengths.
#[derive(Clone, Debug)]
pub struct EnetProblem {
    gram: Mat,
    xty: Vec<f64>,
    /// `‖y‖²/M` of the preprocessed target, for objective evaluation.
    yy: f64,
    x_mean: Vec<f64>,
    y_mean: f64,
    scale: Vec<f64>,
    fit_intercept: bool,
}

impl EnetProblem {
    pub fn new(x: &Mat, y: &[f64], fit_intercept: bool, standardize: bool) -> Result<Self> {
        check_xy(x, &Mat::column(y))?;
        let m = x.rows();
        let mf = m as f64;
        let offset = usize::from(fit_intercept);
        if fit_intercept && (x.cols() < 2 || (0..m).any(|i| x[(i, 0)] != 1.0)) {
            return Err(Error::InvalidParameter(
                "fit_intercept requires column 0 to be all ones and at least one predictor".into(),
            ));
        }
        let d = x.cols() - offset;
        let x_mean: Vec<f64> = (0..d)
            .map(|j| {
                if fit_intercept {
                    (0..m).map(|i| x[(i, j + offset)]).sum::<f64>() / mf
                } else {
                    0.0
                }
            })
            .collect();
        let y_mean = if fit_intercept {
            y.iter().sum::<f64>() / mf
        } else {
            0.0
        };
        let scale: Vec<f64> = (0..d)
            .map(|j| {
                if !standardize {
                    return 1.0;
                }
                let ss = (0..m)
                    .map(|i| (x[(i, j + offset)] - x_mean[j]).powi(2))
                    .sum::<f64>();
                let s = (ss / mf).sqrt();
                if s > 0.0 {
                    s
                } else {
                    1.0
                }
            })
            .collect();
        let z = Mat::from_fn(m, d, |i, j| (x[(i, j + offset)] - x_mean[j]) / scale[j]);
        let yc: Vec<f64> = y.iter().map(|v| v - y_mean).collect();
        Ok(Self {
            gram: z.gram().scale(1.0 / mf),
            xty: z.t_mul_vec(&yc).iter().map(|v| v / mf).collect(),
            yy: yc.iter().map(|v| v * v).sum::<f64>() / mf,
            x_mean,
            y_mean,
            scale,
            fit_intercept,
        })
    }

    /// Number of penalized coefficients.
    pub fn n_inner(&self) -> usize {
        self.xty.len()
    }

    /// Objective value of an internal coefficient vector.
    pub fn objective(&self, inner: &[f64], strength: f64, l1_ratio: f64) -> f64 {
        let ga = self.gram.mul_vec(inner);
        let quad: f64 = inner.iter().zip(&ga).map(|(a, g)| a * g).sum();
        let lin: f64 = inner.iter().zip(&self.xty).map(|(a, c)| a * c).sum();
        let l1: f64 = inner.iter().map(|a| a.abs()).sum();
        let l2: f64 = inner.iter().map(|a| a * a).sum();
        0.5 * (self.yy - 2.0 * lin + quad) + strength * (l1_ratio * l1 + 0.5 * (1.0 - l1_ratio) * l2)
    }

    /// Gradient of the smooth least-squares part at an internal vector.
    pub fn loss_gradient(&self, inner: &[f64]) -> Vec<f64> {
        let ga = self.gram.mul_vec(inner);
        ga.iter().zip(&self.xty).map(|(g, c)| g - c).collect()
    }

    pub fn solve(
        &self,
        strength: f64,
        l1_ratio: f64,
        max_iters: usize,
        tol: f64,
        warm: Option<&[f64]>,
    ) -> EnetFit {
        let d = self.n_inner();
        let mut alpha = match warm {
            Some(w) if w.len() == d => w.to_vec(),
            _ => vec![0.0; d],
        };
        // Running Gα, updated incrementally per coordinate.
        let mut ga = self.gram.mul_vec(&alpha);
        let l1 = strength * l1_ratio;
        let l2 = strength * (1.0 - l1_ratio);
        let mut converged = false;
        let mut sweeps = 0;
        // After each unconverged full sweep, iterate on the current support
        // until it settles, then verify with another full sweep.
        let mut full = true;
        let mut active: Vec<usize> = Vec::with_capacity(d);
        while sweeps < max_iters {
            sweeps += 1;
            let mut max_delta = 0.0_f64;
            let visit = if full { None } else { Some(&active) };
            let n_visit = visit.map_or(d, |a| a.len());
            for pos in 0..n_visit {
                let j = visit.map_or(pos, |a| a[pos]);
                let row = self.gram.row(j);
                let gjj = row[j];
                if gjj == 0.0 {
                    continue;
                }
                let old = alpha[j];
                let z = self.xty[j] - ga[j] + gjj * old;
                let new = soft_threshold(z, l1) / (gjj + l2);
                let delta = new - old;
                if delta != 0.0 {
                    alpha[j] = new;
                    for (g, r) in ga.iter_mut().zip(row) {
                        *g += r * delta;
                    }
                    max_delta = max_delta.max(delta.abs());
                }
            }
            if full {
                if max_delta < tol {
                    converged = true;
                    break;
                }
                active.clear();
                active.extend((0..d).filter(|&j| alpha[j] != 0.0));
                full = false;
            } else if max_delta < tol {
                full = true;
            }
        }
        EnetFit {
            coeffs: self.to_original(&alpha),
            inner: alpha,
            converged,
            sweeps,
        }
    }

    fn to_original(&self, inner: &[f64]) -> Vec<f64> {
        let beta: Vec<f64> = inner.iter().zip(&self.scale).map(|(a, s)| a / s).collect();
        if self.fit_intercept {
            let b0 = self.y_mean - beta.iter().zip(&self.x_mean).map(|(b, m)| b * m).sum::<f64>();
            std::iter::once(b0).chain(beta).collect()
        } else {
            beta
        }
    }
}

pub fn soft_threshold(z: f64, t: f64) -> f64 {
    if z > t {
        z - t
    } else if z < -t {
        z + t
    } else {
        0.0
    }
}

fn record(coeffs: Mat, cfg: &EnetConfig, converged: bool) -> CoefficientSet {
    let mut set = CoefficientSet::new(
        coeffs,
        MethodTag::ElasticNet,
        BridgeConfig::new(1.0, cfg.alpha_strength),
    );
    set.converged = converged;
    set
}

/// Fits every output column independently. Hitting `max_iters` is not an
/// error; the last iterate is returned with `converged = false`.
pub fn fit_elastic_net(x: &Mat, y: &Mat, cfg: &EnetConfig) -> Result<CoefficientSet> {
    cfg.validate()?;
    check_xy(x, y)?;
    let mut out = Mat::zeros(x.cols(), y.cols());
    let mut converged = true;
    for l in 0..y.cols() {
        let problem = EnetProblem::new(x, &y.col(l), cfg.fit_intercept, cfg.standardize)?;
        let fit = problem.solve(cfg.alpha_strength, cfg.l1_ratio, cfg.max_iters, cfg.tol, None);
        converged &= fit.converged;
        out.set_col(l, &fit.coeffs);
    }
    Ok(record(out, cfg, converged))
}

/// Solves along `strengths` in descending order with warm starts. The
/// returned sets follow the order of `strengths` as given.
pub fn fit_elastic_net_path(
    x: &Mat,
    y: &[f64],
    cfg: &EnetConfig,
    strengths: &[f64],
) -> Result<Vec<CoefficientSet>> {
    cfg.validate()?;
    let problem = EnetProblem::new(x, y, cfg.fit_intercept, cfg.standardize)?;
    let mut order: Vec<usize> = (0..strengths.len()).collect();
    order.sort_by(|&a, &b| strengths[b].total_cmp(&strengths[a]));
    let mut out: Vec<Option<CoefficientSet>> = vec![None; strengths.len()];
    let mut warm: Option<Vec<f64>> = None;
    for idx in order {
        let s = strengths[idx];
        if !(s >= 0.0) || !s.is_finite() {
            return Err(Error::InvalidParameter(format!("invalid strength {s}")));
        }
        let fit = problem.solve(s, cfg.l1_ratio, cfg.max_iters, cfg.tol, warm.as_deref());
        let step_cfg = EnetConfig {
            alpha_strength: s,
            ..cfg.clone()
        };
        out[idx] = Some(record(Mat::column(&fit.coeffs), &step_cfg, fit.converged));
        warm = Some(fit.inner);
    }
    Ok(out.into_iter().flatten().collect())
}
