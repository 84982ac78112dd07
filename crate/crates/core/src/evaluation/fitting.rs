use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::baselines::{EnetConfig, EnetProblem};
use crate::error::{Error, Result};
use crate::estimators::intercept::center_for_intercept;
use crate::estimators::{fit_lqa, fit_pbridge_dual, BridgeConfig, GramSystem};
use crate::linalg::{solve_regularized, Mat};

/// An estimator family whose hyperparameters are supplied per grid tuple.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Ols,
    Ridge,
    /// `k` and `lambda` of the config are replaced by the tuple.
    Pbridge(BridgeConfig),
    /// `alpha_strength` comes from the tuple's `lambda`, `l1_ratio` from the
    /// tuple when present.
    ElasticNet(EnetConfig),
    Lqa { iters: usize },
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Ols => "ols",
            Method::Ridge => "ridge",
            Method::Pbridge(_) => "pbridge",
            Method::ElasticNet(c) if c.l1_ratio == 1.0 => "lasso",
            Method::ElasticNet(_) => "enet",
            Method::Lqa { .. } => "lqa",
        }
    }

    /// Hyperparameter tuples spanned by `grid` for this method. Axes the
    /// method does not use are ignored; empty axes fall back to the
    /// method's own setting.
    pub fn tuples(&self, grid: &ParamGrid) -> Vec<Hyper> {
        let lambdas = |default: f64| {
            if grid.lambda.is_empty() {
                vec![default]
            } else {
                grid.lambda.clone()
            }
        };
        match self {
            Method::Ols => vec![Hyper::new(0.0)],
            Method::Ridge => lambdas(0.0).into_iter().map(Hyper::new).collect(),
            Method::Pbridge(cfg) => {
                let ks = if grid.k.is_empty() { vec![cfg.k] } else { grid.k.clone() };
                cross(&lambdas(cfg.lambda), &ks, Hyper::with_k)
            }
            Method::Lqa { .. } => {
                let ks = if grid.k.is_empty() { vec![1.0] } else { grid.k.clone() };
                cross(&lambdas(0.0), &ks, Hyper::with_k)
            }
            Method::ElasticNet(cfg) => {
                let rs = if grid.l1_ratio.is_empty() {
                    vec![cfg.l1_ratio]
                } else {
                    grid.l1_ratio.clone()
                };
                cross(&lambdas(cfg.alpha_strength), &rs, Hyper::with_l1_ratio)
            }
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn cross(a: &[f64], b: &[f64], make: impl Fn(f64, f64) -> Hyper) -> Vec<Hyper> {
    a.iter().flat_map(|&x| b.iter().map(move |&y| (x, y))).map(|(x, y)| make(x, y)).collect()
}

/// One hyperparameter setting.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Hyper {
    pub lambda: f64,
    pub k: Option<f64>,
    pub l1_ratio: Option<f64>,
}

impl Hyper {
    pub fn new(lambda: f64) -> Self {
        Self {
            lambda,
            k: None,
            l1_ratio: None,
        }
    }

    pub fn with_k(lambda: f64, k: f64) -> Self {
        Self {
            k: Some(k),
            ..Self::new(lambda)
        }
    }

    pub fn with_l1_ratio(lambda: f64, l1_ratio: f64) -> Self {
        Self {
            l1_ratio: Some(l1_ratio),
            ..Self::new(lambda)
        }
    }

    fn secondary(&self) -> f64 {
        self.k.or(self.l1_ratio).unwrap_or(0.0)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ParamGrid {
    pub lambda: Vec<f64>,
    pub k: Vec<f64>,
    pub l1_ratio: Vec<f64>,
}

/// Index of the smallest finite score; ties go to the larger `lambda`, then
/// the larger `k` (or l1 ratio).
pub fn select_best(tuples: &[Hyper], scores: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, s) in scores.iter().enumerate() {
        if !s.is_finite() {
            continue;
        }
        best = match best {
            None => Some(i),
            Some(b) => {
                let better = match s.total_cmp(&scores[b]) {
                    Ordering::Less => true,
                    Ordering::Greater => false,
                    Ordering::Equal => {
                        (tuples[i].lambda, tuples[i].secondary()) > (tuples[b].lambda, tuples[b].secondary())
                    }
                };
                Some(if better { i } else { b })
            }
        };
    }
    best
}

/// Fits `method` at every tuple, sharing factorizations and warm starts
/// where the method allows. Results follow the order of `tuples`.
pub fn fit_tuples(method: &Method, x: &Mat, y: &Mat, tuples: &[Hyper]) -> Vec<Result<Mat>> {
    match method {
        Method::Ols | Method::Ridge => {
            let lambda_of = |t: &Hyper| if matches!(method, Method::Ols) { 0.0 } else { t.lambda };
            if x.rows() >= x.cols() {
                let (g, xty) = (x.gram(), x.t_mul(y));
                tuples.iter().map(|t| solve_regularized(&g, lambda_of(t), &xty)).collect()
            } else {
                let h = x.outer_gram();
                tuples
                    .iter()
                    .map(|t| Ok(x.t_mul(&solve_regularized(&h, lambda_of(t), y)?)))
                    .collect()
            }
        }
        Method::Pbridge(base) => {
            let cfg_of = |t: &Hyper| BridgeConfig {
                k: t.k.unwrap_or(base.k),
                lambda: t.lambda,
                ..base.clone()
            };
            if x.rows() < x.cols() {
                return tuples
                    .iter()
                    .map(|t| fit_pbridge_dual(x, y, &cfg_of(t)).map(|c| c.coeffs))
                    .collect();
            }
            if base.penalize_intercept {
                match GramSystem::new(x, y) {
                    Ok(sys) => tuples.iter().map(|t| sys.solve(&cfg_of(t))).collect(),
                    Err(e) => fail_all(tuples, e),
                }
            } else {
                let prepared = center_for_intercept(x, y).and_then(|c| {
                    let sys = GramSystem::new(&c.x, &c.y)?;
                    Ok((c, sys))
                });
                match prepared {
                    Ok((c, sys)) => tuples
                        .iter()
                        .map(|t| sys.solve(&cfg_of(t)).map(|s| c.restore(&s)))
                        .collect(),
                    Err(e) => fail_all(tuples, e),
                }
            }
        }
        Method::Lqa { iters } => tuples
            .iter()
            .map(|t| fit_lqa(x, y, t.lambda, t.k.unwrap_or(1.0), *iters).map(|c| c.coeffs))
            .collect(),
        Method::ElasticNet(cfg) => fit_enet_tuples(cfg, x, y, tuples),
    }
}

fn fail_all(tuples: &[Hyper], e: Error) -> Vec<Result<Mat>> {
    let msg = e.to_string();
    let mut out = vec![Err(e)];
    out.extend((1..tuples.len()).map(|_| Err(Error::InvalidParameter(msg.clone()))));
    out.truncate(tuples.len());
    out
}

/// Warm-started descending-strength paths, one per distinct l1 ratio.
fn fit_enet_tuples(cfg: &EnetConfig, x: &Mat, y: &Mat, tuples: &[Hyper]) -> Vec<Result<Mat>> {
    let mut out: Vec<Result<Mat>> = tuples.iter().map(|_| Ok(Mat::zeros(x.cols(), y.cols()))).collect();
    for t in tuples {
        if !(t.lambda >= 0.0) || !t.lambda.is_finite() {
            return fail_all(tuples, Error::InvalidParameter(format!("invalid strength {}", t.lambda)));
        }
        let r = t.l1_ratio.unwrap_or(cfg.l1_ratio);
        if !(0.0..=1.0).contains(&r) {
            return fail_all(tuples, Error::InvalidParameter(format!("l1 ratio {r} outside [0, 1]")));
        }
    }
    // Ratios ascending; strength runs alternate direction between ratios so
    // consecutive solves are neighbours and warm starts stay close.
    let ratio = |i: usize| tuples[i].l1_ratio.unwrap_or(cfg.l1_ratio);
    let mut order: Vec<usize> = (0..tuples.len()).collect();
    order.sort_by(|&a, &b| ratio(a).total_cmp(&ratio(b)));
    let mut ordered = Vec::with_capacity(order.len());
    for (block, run) in order.chunk_by(|&a, &b| ratio(a) == ratio(b)).enumerate() {
        let mut run = run.to_vec();
        run.sort_by(|&a, &b| tuples[b].lambda.total_cmp(&tuples[a].lambda));
        if block % 2 == 1 {
            run.reverse();
        }
        ordered.extend(run);
    }
    let order = ordered;
    for l in 0..y.cols() {
        let problem = match EnetProblem::new(x, &y.col(l), cfg.fit_intercept, cfg.standardize) {
            Ok(p) => p,
            Err(e) => return fail_all(tuples, e),
        };
        let mut warm: Option<Vec<f64>> = None;
        for &idx in &order {
            let fit = problem.solve(tuples[idx].lambda, ratio(idx), cfg.max_iters, cfg.tol, warm.as_deref());
            if let Ok(m) = out[idx].as_mut() {
                m.set_col(l, &fit.coeffs);
            }
            warm = Some(fit.inner);
        }
    }
    out
}
