use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cv::cross_validate;
use super::fitting::{fit_tuples, select_best, Hyper, Method, ParamGrid};
use super::grid::{paper_k_grid, paper_l1_ratio_grid, paper_lambda_grid};
use super::metrics::{count_nonzero, prediction_mse, weighted_mse, DEFAULT_NONZERO_TOL};
use crate::baselines::EnetConfig;
use crate::datasets::{gen_sim_with, gen_xor_test_with, gen_xor_train, trial_rng, Dataset, SimSpec};
use crate::error::{Error, Result};
use crate::estimators::{stationarity_residual, BridgeConfig};
use crate::linalg::{norm_inf, Mat};

/// Bootstrap resamples behind every reported standard error.
pub const BOOTSTRAP_RESAMPLES: usize = 1000;
/// Minimum fraction of trials a method must complete.
pub const MIN_COMPLETION: f64 = 0.8;
/// RNG streams at or above this value are reserved for bootstrapping.
const BOOTSTRAP_STREAM: u64 = 1 << 40;

/// Search ranges for the tuned methods.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchGrids {
    pub lambda: Vec<f64>,
    pub k: Vec<f64>,
    pub l1_ratio: Vec<f64>,
}

impl BenchGrids {
    /// The full published search ranges.
    pub fn paper() -> Self {
        Self {
            lambda: paper_lambda_grid(),
            k: paper_k_grid(),
            l1_ratio: paper_l1_ratio_grid(),
        }
    }
}

/// The six compared estimators with their search grids.
pub fn standard_methods(grids: &BenchGrids, with_intercept: bool) -> Vec<(String, Method, ParamGrid)> {
    let lam = |k: Vec<f64>, r: Vec<f64>| ParamGrid {
        lambda: grids.lambda.clone(),
        k,
        l1_ratio: r,
    };
    let bridge = BridgeConfig::new(1.0, 0.0).with_penalize_intercept(!with_intercept);
    let enet = |r: f64| Method::ElasticNet(EnetConfig::new(0.0, r).with_intercept(with_intercept));
    vec![
        ("ols".into(), Method::Ols, ParamGrid::default()),
        ("ridge".into(), Method::Ridge, lam(vec![], vec![])),
        ("lasso".into(), enet(1.0), lam(vec![], vec![])),
        ("enet".into(), enet(0.5), lam(vec![], grids.l1_ratio.clone())),
        ("pbridge@k1".into(), Method::Pbridge(bridge.clone()), lam(vec![1.0], vec![])),
        ("pbridge".into(), Method::Pbridge(bridge), lam(grids.k.clone(), vec![])),
    ]
}

/// Outcome of one method on one trial.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub trial: usize,
    pub mse: f64,
    pub nonzero: usize,
    pub selected: Vec<usize>,
    pub chosen: Hyper,
    /// Stationarity residual of the bridge fixed point relative to
    /// `‖Xᵀy‖∞`, for bridge methods.
    pub stationarity: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MethodReport {
    pub method: String,
    /// Median over trials of the benchmark's error statistic.
    pub median_mse: f64,
    /// Bootstrap standard error of `median_mse`.
    pub se: f64,
    pub median_nonzero: f64,
    /// Fraction of completed trials selecting each coefficient.
    pub selection_frequency: Vec<f64>,
    pub completed: usize,
    pub failed: usize,
    pub trials: Vec<TrialOutcome>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub benchmark: String,
    /// What `median_mse` measures.
    pub statistic: String,
    pub trials: usize,
    pub seed: u64,
    pub nonzero_tol: f64,
    pub methods: Vec<MethodReport>,
}

impl BenchReport {
    pub fn method(&self, name: &str) -> Option<&MethodReport> {
        self.methods.iter().find(|m| m.method == name)
    }
}

pub fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Standard deviation of `stat` over bootstrap resamples of `values`.
pub fn bootstrap_se(values: &[f64], stat: fn(&[f64]) -> f64, seed: u64, stream: u64) -> f64 {
    if values.len() < 2 {
        return f64::NAN;
    }
    let mut rng = trial_rng(seed, BOOTSTRAP_STREAM + stream);
    let mut buf = vec![0.0; values.len()];
    let stats: Vec<f64> = (0..BOOTSTRAP_RESAMPLES)
        .map(|_| {
            for b in buf.iter_mut() {
                *b = values[rng.random_range(0..values.len())];
            }
            stat(&buf)
        })
        .collect();
    let m = mean(&stats);
    (stats.iter().map(|s| (s - m).powi(2)).sum::<f64>() / (stats.len() - 1) as f64).sqrt()
}

fn aggregate(name: &str, idx: usize, outcomes: Vec<Option<TrialOutcome>>, width: usize, seed: u64) -> MethodReport {
    let failed = outcomes.iter().filter(|o| o.is_none()).count();
    let done: Vec<TrialOutcome> = outcomes.into_iter().flatten().collect();
    let mses: Vec<f64> = done.iter().map(|o| o.mse).collect();
    let counts: Vec<f64> = done.iter().map(|o| o.nonzero as f64).collect();
    let mut freq = vec![0.0; width];
    for o in &done {
        for &j in &o.selected {
            freq[j] += 1.0;
        }
    }
    let n = done.len().max(1) as f64;
    MethodReport {
        method: name.to_string(),
        median_mse: median(&mses),
        se: bootstrap_se(&mses, median, seed, idx as u64),
        median_nonzero: median(&counts),
        selection_frequency: freq.into_iter().map(|f| f / n).collect(),
        completed: done.len(),
        failed,
        trials: done,
    }
}

fn check_completion(report: &BenchReport) -> Result<()> {
    for m in &report.methods {
        let total = m.completed + m.failed;
        if (m.completed as f64) < MIN_COMPLETION * total as f64 {
            return Err(Error::TooManyFailures(format!(
                "{} completed {} of {} trials",
                m.method, m.completed, total
            )));
        }
    }
    Ok(())
}

fn relative_stationarity(method: &Method, x: &Mat, y: &Mat, alpha: &[f64], h: &Hyper) -> Option<f64> {
    match method {
        Method::Pbridge(cfg) if x.rows() >= x.cols() && cfg.penalize_intercept => {
            let y = y.col(0);
            let k = h.k.unwrap_or(cfg.k);
            let scale = norm_inf(&x.t_mul_vec(&y));
            Some(stationarity_residual(x, &y, alpha, h.lambda, k) / scale)
        }
        _ => None,
    }
}

/// Selects each method's hyperparameters on the validation split and scores
/// the chosen fit on the test split with the design-weighted parameter error.
/// Trial `t` draws its data from RNG stream `t` of `seed`.
pub fn monte_carlo_bench(example_id: u8, trials: usize, grids: &BenchGrids, seed: u64) -> Result<BenchReport> {
    let spec = SimSpec::example(example_id)?;
    monte_carlo_bench_spec(&spec, trials, grids, seed)
}

pub fn monte_carlo_bench_spec(spec: &SimSpec, trials: usize, grids: &BenchGrids, seed: u64) -> Result<BenchReport> {
    if trials == 0 {
        return Err(Error::InvalidParameter("at least one trial is required".into()));
    }
    let methods = standard_methods(grids, false);
    let tuples: Vec<Vec<Hyper>> = methods.iter().map(|(_, m, g)| m.tuples(g)).collect();
    let per_trial: Vec<Vec<Option<TrialOutcome>>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let draw = match gen_sim_with(spec, &mut trial_rng(seed, t as u64)) {
                Ok(d) => d,
                Err(_) => return vec![None; methods.len()],
            };
            methods
                .iter()
                .zip(&tuples)
                .map(|((_, method, _), tup)| sim_trial(t, method, tup, &draw.train, &draw.valid, &draw.test, spec))
                .collect()
        })
        .collect();
    let width = spec.n_features();
    let reports = methods
        .iter()
        .enumerate()
        .map(|(i, (name, _, _))| {
            let outcomes = per_trial.iter().map(|row| row[i].clone()).collect();
            aggregate(name, i, outcomes, width, seed)
        })
        .collect();
    let report = BenchReport {
        benchmark: format!("sim{}", spec.example_id),
        statistic: "median over trials of the test-design weighted parameter MSE".into(),
        trials,
        seed,
        nonzero_tol: DEFAULT_NONZERO_TOL,
        methods: reports,
    };
    check_completion(&report)?;
    Ok(report)
}

fn sim_trial(
    t: usize,
    method: &Method,
    tuples: &[Hyper],
    train: &Dataset,
    valid: &Dataset,
    test: &Dataset,
    spec: &SimSpec,
) -> Option<TrialOutcome> {
    let fits = fit_tuples(method, &train.x, &train.y, tuples);
    let scores: Vec<f64> = fits
        .iter()
        .map(|f| match f {
            Ok(c) if c.is_finite() => prediction_mse(&valid.x.mul(c), &valid.y),
            _ => f64::NAN,
        })
        .collect();
    let best = select_best(tuples, &scores)?;
    let alpha = fits[best].as_ref().ok()?.col(0);
    let sel = count_nonzero(&alpha, DEFAULT_NONZERO_TOL);
    Some(TrialOutcome {
        trial: t,
        mse: weighted_mse(&alpha, &spec.true_alpha, &test.x),
        nonzero: sel.count,
        selected: sel.indices,
        chosen: tuples[best],
        stationarity: relative_stationarity(method, &train.x, &train.y, &alpha, &tuples[best]),
    })
}

/// Fixed-setting estimators compared on the XOR problem.
pub fn xor_methods() -> Vec<(String, Method, Hyper)> {
    vec![
        ("ols".into(), Method::Ols, Hyper::new(0.0)),
        ("ridge".into(), Method::Ridge, Hyper::new(6.0)),
        (
            "lasso".into(),
            Method::ElasticNet(EnetConfig::lasso(0.1).with_intercept(true).with_standardize(true)),
            Hyper::with_l1_ratio(0.1, 1.0),
        ),
        (
            "pbridge@k1.05".into(),
            Method::Pbridge(BridgeConfig::new(1.05, 30.0)),
            Hyper::with_k(30.0, 1.05),
        ),
        ("pbridge@k2".into(), Method::Pbridge(BridgeConfig::new(2.0, 0.0)), Hyper::with_k(0.0, 2.0)),
    ]
}

/// Fits each XOR method once on the four training points and scores it on
/// `trials` independently drawn 200-point test sets.
pub fn xor_bench(trials: usize, seed: u64) -> Result<BenchReport> {
    if trials == 0 {
        return Err(Error::InvalidParameter("at least one trial is required".into()));
    }
    let train = gen_xor_train();
    let tests: Vec<Dataset> = (0..trials)
        .into_par_iter()
        .map(|t| gen_xor_test_with(&mut trial_rng(seed, t as u64)).0)
        .collect();
    let mut reports = Vec::new();
    for (i, (name, method, hyper)) in xor_methods().into_iter().enumerate() {
        let fit = fit_tuples(&method, &train.x, &train.y, &[hyper]).pop().expect("one tuple");
        let outcomes: Vec<Option<TrialOutcome>> = match fit {
            Ok(coeffs) => {
                let alpha = coeffs.col(0);
                let sel = count_nonzero(&alpha, DEFAULT_NONZERO_TOL);
                tests
                    .iter()
                    .enumerate()
                    .map(|(t, test)| {
                        Some(TrialOutcome {
                            trial: t,
                            mse: prediction_mse(&test.x.mul(&coeffs), &test.y),
                            nonzero: sel.count,
                            selected: sel.indices.clone(),
                            chosen: hyper,
                            stationarity: None,
                        })
                    })
                    .collect()
            }
            Err(_) => vec![None; trials],
        };
        reports.push(aggregate(&name, i, outcomes, train.n_features(), seed));
    }
    let report = BenchReport {
        benchmark: "xor".into(),
        statistic: "median over regenerated test sets of the prediction MSE".into(),
        trials,
        seed,
        nonzero_tol: DEFAULT_NONZERO_TOL,
        methods: reports,
    };
    check_completion(&report)?;
    Ok(report)
}

/// Tunes each method by `folds`-fold cross-validation on `train` and
/// reports the test prediction MSE of the refit, with a bootstrap standard
/// error over test samples. Both splits must carry the intercept column.
pub fn prostate_bench(train: &Dataset, test: &Dataset, grids: &BenchGrids, folds: usize, seed: u64) -> Result<BenchReport> {
    let mut reports = Vec::new();
    for (i, (name, method, grid)) in standard_methods(grids, true).into_iter().enumerate() {
        let outcome = cross_validate(train, &method, &grid, folds, seed).and_then(|cv| {
            let coeffs = fit_tuples(&method, &train.x, &train.y, &[cv.best]).pop().expect("one tuple")?;
            Ok((cv.best, coeffs))
        });
        let report = match outcome {
            Ok((chosen, coeffs)) => {
                let alpha = coeffs.col(0);
                let resid: Vec<f64> = test
                    .x
                    .mul(&coeffs)
                    .as_slice()
                    .iter()
                    .zip(test.y.as_slice())
                    .map(|(p, t)| (p - t) * (p - t))
                    .collect();
                // Intercept is excluded from the selected set.
                let sel = count_nonzero(&alpha[1..], DEFAULT_NONZERO_TOL);
                let selected: Vec<usize> = sel.indices.iter().map(|j| j + 1).collect();
                let mut freq = vec![0.0; alpha.len()];
                for &j in &selected {
                    freq[j] = 1.0;
                }
                MethodReport {
                    method: name,
                    median_mse: mean(&resid),
                    se: bootstrap_se(&resid, mean, seed, i as u64),
                    median_nonzero: sel.count as f64,
                    selection_frequency: freq,
                    completed: 1,
                    failed: 0,
                    trials: vec![TrialOutcome {
                        trial: 0,
                        mse: mean(&resid),
                        nonzero: sel.count,
                        selected,
                        chosen,
                        stationarity: None,
                    }],
                }
            }
            Err(_) => MethodReport {
                method: name,
                median_mse: f64::NAN,
                se: f64::NAN,
                median_nonzero: f64::NAN,
                selection_frequency: vec![0.0; train.n_features()],
                completed: 0,
                failed: 1,
                trials: Vec::new(),
            },
        };
        reports.push(report);
    }
    let report = BenchReport {
        benchmark: "prostate".into(),
        statistic: "test prediction MSE of the cross-validated fit".into(),
        trials: 1,
        seed,
        nonzero_tol: DEFAULT_NONZERO_TOL,
        methods: reports,
    };
    check_completion(&report)?;
    Ok(report)
}
