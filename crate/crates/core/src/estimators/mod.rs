//! Regression estimators: ordinary least squares, ridge, and the proximal
//! bridge solvers in primal (over-determined) and dual (under-determined)
//! form, plus the k-measure penalty and a few fixed-point diagnostics.

mod closed_form;
mod diagnostics;
mod dual;
pub(crate) mod intercept;
mod lqa;
mod measure;
mod primal;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Mat;

pub use closed_form::{fit_ols, fit_ridge};
pub use diagnostics::{check_invertibility_condition, stationarity_residual};
pub use dual::fit_pbridge_dual;
pub use lqa::fit_lqa;
pub use measure::{bridge_objective, k_measure};
pub use primal::{fit_pbridge_primal, GramSystem};

/// Refinement passes of the primal fixed point.
pub const DEFAULT_REFINE_ITERS: usize = 4;
/// Offset inside `|alpha|^(k-2)` guarding zero coefficients.
pub const DEFAULT_JITTER: f64 = 1e-10;

/// How the dual solver raises the (possibly negative) vector `theta` to the
/// power `k - 1`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DualPower {
    /// Principal complex branch, `(-t)^p = t^p e^{i pi p}`; the modulus is
    /// taken after the projection. This is the reference behaviour.
    #[default]
    Principal,
    /// Real odd extension, `sgn(t) |t|^p`.
    Signed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BridgeConfig {
    /// Norm-power exponent.
    pub k: f64,
    /// Penalty strength.
    pub lambda: f64,
    /// Ridge shift added to every inverse. `None` means 0 in the primal
    /// solver and `lambda` in the dual solver, where the shift is a
    /// conditioning knob rather than a Lagrangian penalty.
    pub epsilon_reg: Option<f64>,
    pub refine_iters: usize,
    pub jitter: f64,
    /// When false, column 0 of the design must be the all-ones intercept
    /// column; the remaining predictors are centered and the intercept is
    /// recovered from the means instead of being shrunk.
    pub penalize_intercept: bool,
    pub dual_power: DualPower,
}

impl Default for BridgeConfig {
    fn default() -> Self {
        Self {
            k: 2.0,
            lambda: 0.0,
            epsilon_reg: None,
            refine_iters: DEFAULT_REFINE_ITERS,
            jitter: DEFAULT_JITTER,
            penalize_intercept: true,
            dual_power: DualPower::Principal,
        }
    }
}

impl BridgeConfig {
    pub fn new(k: f64, lambda: f64) -> Self {
        Self {
            k,
            lambda,
            ..Self::default()
        }
    }

    pub fn with_epsilon_reg(mut self, rho: f64) -> Self {
        self.epsilon_reg = Some(rho);
        self
    }

    pub fn with_refine_iters(mut self, iters: usize) -> Self {
        self.refine_iters = iters;
        self
    }

    pub fn with_penalize_intercept(mut self, penalize: bool) -> Self {
        self.penalize_intercept = penalize;
        self
    }

    pub fn with_dual_power(mut self, power: DualPower) -> Self {
        self.dual_power = power;
        self
    }

    pub(crate) fn primal_rho(&self) -> f64 {
        self.epsilon_reg.unwrap_or(0.0)
    }

    pub(crate) fn dual_rho(&self) -> f64 {
        self.epsilon_reg.unwrap_or(self.lambda)
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if !(self.lambda >= 0.0) || !self.lambda.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "lambda must be a finite nonnegative number, got {}",
                self.lambda
            )));
        }
        if let Some(rho) = self.epsilon_reg {
            if !(rho >= 0.0) || !rho.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "epsilon_reg must be a finite nonnegative number, got {rho}"
                )));
            }
        }
        if !(self.jitter >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "jitter must be nonnegative, got {}",
                self.jitter
            )));
        }
        if !self.k.is_finite() {
            return Err(Error::InvalidK {
                k: self.k,
                reason: "exponent must be finite",
            });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodTag {
    Ols,
    Ridge,
    PbridgePrimal,
    PbridgeDual,
    Lqa,
    ElasticNet,
}

impl MethodTag {
    pub fn label(self) -> &'static str {
        match self {
            MethodTag::Ols => "ols",
            MethodTag::Ridge => "ridge",
            MethodTag::PbridgePrimal => "pbridge-primal",
            MethodTag::PbridgeDual => "pbridge-dual",
            MethodTag::Lqa => "lqa",
            MethodTag::ElasticNet => "elastic-net",
        }
    }
}

impl fmt::Display for MethodTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Estimated coefficients, one column per output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoefficientSet {
    pub coeffs: Mat,
    pub method: MethodTag,
    pub config: BridgeConfig,
    /// False when an iterative solver stopped at its iteration cap.
    pub converged: bool,
}

impl CoefficientSet {
    pub(crate) fn new(coeffs: Mat, method: MethodTag, config: BridgeConfig) -> Self {
        Self {
            coeffs,
            method,
            config,
            converged: true,
        }
    }

    pub fn n_features(&self) -> usize {
        self.coeffs.rows()
    }

    pub fn n_outputs(&self) -> usize {
        self.coeffs.cols()
    }

    /// Coefficient vector of output `l`.
    pub fn column(&self, l: usize) -> Vec<f64> {
        self.coeffs.col(l)
    }

    pub fn predict(&self, x: &Mat) -> Mat {
        x.mul(&self.coeffs)
    }

    /// Coefficients with magnitude below `tol` replaced by exact zeros.
    pub fn thresholded(&self, tol: f64) -> Mat {
        self.coeffs.map(|a| if a.abs() < tol { 0.0 } else { a })
    }
}

pub(crate) fn check_xy(x: &Mat, y: &Mat) -> Result<()> {
    if x.rows() != y.rows() {
        return Err(Error::DimensionMismatch(format!(
            "design has {} rows but targets have {}",
            x.rows(),
            y.rows()
        )));
    }
    if !x.is_finite() || !y.is_finite() {
        return Err(Error::NonFinite("input data"));
    }
    Ok(())
}

/// Dispatches on shape: primal when `M >= D`, dual otherwise.
pub fn fit_pbridge(x: &Mat, y: &Mat, cfg: &BridgeConfig) -> Result<CoefficientSet> {
    if x.rows() < x.cols() {
        fit_pbridge_dual(x, y, cfg)
    } else {
        fit_pbridge_primal(x, y, cfg)
    }
}
