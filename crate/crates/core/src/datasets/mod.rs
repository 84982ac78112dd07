//! Datasets: the in-memory container, standardization, loaders, and the
//! synthetic generators used by the benchmarks.

mod io;
pub(crate) mod sim;
mod xor;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Mat;

pub use io::{load_csv, load_prostate, prostate_design, ProstateSplit, PROSTATE_PREDICTORS};
pub use sim::{gen_sim, gen_sim_with, trial_rng, Correlation, SimDraw, SimSpec};
pub use xor::{gen_xor_test, gen_xor_test_with, gen_xor_train, poly3_features, POLY3_NAMES, XOR_CENTERS};

/// Divisor used for the per-column standard deviation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScaleKind {
    /// `n - 1`.
    Sample,
    /// `n`.
    Population,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Standardization {
    pub mean: Vec<f64>,
    pub scale: Vec<f64>,
    /// Columns with zero spread; centered but not scaled.
    pub constant: Vec<bool>,
}

impl Standardization {
    /// Applies the recorded transform to another design with the same columns.
    pub fn apply(&self, x: &Mat) -> Mat {
        assert_eq!(x.cols(), self.mean.len(), "column count mismatch");
        Mat::from_fn(x.rows(), x.cols(), |i, j| (x[(i, j)] - self.mean[j]) / self.scale[j])
    }

    pub fn invert(&self, z: &Mat) -> Mat {
        assert_eq!(z.cols(), self.mean.len(), "column count mismatch");
        Mat::from_fn(z.rows(), z.cols(), |i, j| z[(i, j)] * self.scale[j] + self.mean[j])
    }

    pub fn has_constant_columns(&self) -> bool {
        self.constant.iter().any(|c| *c)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub x: Mat,
    pub y: Mat,
    pub feature_names: Vec<String>,
    pub target_names: Vec<String>,
    pub standardization: Option<Standardization>,
}

impl Dataset {
    pub fn new(x: Mat, y: Mat, feature_names: Vec<String>, target_names: Vec<String>) -> Result<Self> {
        if x.rows() != y.rows() {
            return Err(Error::DimensionMismatch(format!(
                "design has {} rows but targets have {}",
                x.rows(),
                y.rows()
            )));
        }
        if feature_names.len() != x.cols() || target_names.len() != y.cols() {
            return Err(Error::DimensionMismatch("name count does not match column count".into()));
        }
        Ok(Self {
            x,
            y,
            feature_names,
            target_names,
            standardization: None,
        })
    }

    /// Dataset with generated names `x1..xD` and `y1..yC` (or `y`).
    pub fn unnamed(x: Mat, y: Mat) -> Result<Self> {
        let f = (1..=x.cols()).map(|j| format!("x{j}")).collect();
        let t = if y.cols() == 1 {
            vec!["y".to_string()]
        } else {
            (1..=y.cols()).map(|j| format!("y{j}")).collect()
        };
        Self::new(x, y, f, t)
    }

    pub fn n_samples(&self) -> usize {
        self.x.rows()
    }

    pub fn n_features(&self) -> usize {
        self.x.cols()
    }

    pub fn select_rows(&self, idx: &[usize]) -> Dataset {
        Dataset {
            x: self.x.select_rows(idx),
            y: self.y.select_rows(idx),
            feature_names: self.feature_names.clone(),
            target_names: self.target_names.clone(),
            standardization: self.standardization.clone(),
        }
    }

    /// Prepends an all-ones column named `intercept`.
    pub fn with_intercept(&self) -> Dataset {
        let x = Mat::from_fn(self.x.rows(), self.x.cols() + 1, |i, j| {
            if j == 0 {
                1.0
            } else {
                self.x[(i, j - 1)]
            }
        });
        let mut names = vec!["intercept".to_string()];
        names.extend(self.feature_names.iter().cloned());
        Dataset {
            x,
            y: self.y.clone(),
            feature_names: names,
            target_names: self.target_names.clone(),
            standardization: self.standardization.clone(),
        }
    }
}

/// Centers every predictor and scales it to unit sample standard deviation.
pub fn standardize(ds: &Dataset) -> Result<Dataset> {
    standardize_with(ds, ScaleKind::Sample)
}

pub fn standardize_with(ds: &Dataset, kind: ScaleKind) -> Result<Dataset> {
    let m = ds.n_samples();
    if m < 2 {
        return Err(Error::InvalidParameter("standardization needs at least two rows".into()));
    }
    let denom = match kind {
        ScaleKind::Sample => (m - 1) as f64,
        ScaleKind::Population => m as f64,
    };
    let mut mean = Vec::with_capacity(ds.n_features());
    let mut scale = Vec::with_capacity(ds.n_features());
    let mut constant = Vec::with_capacity(ds.n_features());
    for j in 0..ds.n_features() {
        let col = ds.x.col(j);
        let mu = col.iter().sum::<f64>() / m as f64;
        let sd = (col.iter().map(|v| (v - mu).powi(2)).sum::<f64>() / denom).sqrt();
        mean.push(mu);
        if sd > 0.0 {
            scale.push(sd);
            constant.push(false);
        } else {
            scale.push(1.0);
            constant.push(true);
        }
    }
    let transform = Standardization {
        mean,
        scale,
        constant,
    };
    Ok(Dataset {
        x: transform.apply(&ds.x),
        y: ds.y.clone(),
        feature_names: ds.feature_names.clone(),
        target_names: ds.target_names.clone(),
        standardization: Some(transform),
    })
}

/// Reverses [`standardize`]; datasets without a recorded transform are
/// returned unchanged.
pub fn unstandardize(ds: &Dataset) -> Dataset {
    match &ds.standardization {
        None => ds.clone(),
        Some(t) => Dataset {
            x: t.invert(&ds.x),
            y: ds.y.clone(),
            feature_names: ds.feature_names.clone(),
            target_names: ds.target_names.clone(),
            standardization: None,
        },
    }
}

/// Indicator matrix with a single 1 per row at the label's column.
pub fn one_hot(labels: &[usize], classes: usize) -> Result<Mat> {
    if labels.is_empty() || classes == 0 {
        return Err(Error::InvalidParameter("one_hot needs labels and at least one class".into()));
    }
    let mut out = Mat::zeros(labels.len(), classes);
    for (i, &label) in labels.iter().enumerate() {
        if label >= classes {
            return Err(Error::OutOfRangeLabel { label, classes });
        }
        out[(i, label)] = 1.0;
    }
    Ok(out)
}
