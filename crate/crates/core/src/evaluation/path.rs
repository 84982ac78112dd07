use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::fitting::{fit_tuples, Hyper, Method};
use super::metrics::effective_df;
use crate::datasets::Dataset;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepAxis {
    Lambda,
    K,
}

impl SweepAxis {
    pub fn label(self) -> &'static str {
        match self {
            SweepAxis::Lambda => "lambda",
            SweepAxis::K => "k",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "lambda" => Ok(SweepAxis::Lambda),
            "k" => Ok(SweepAxis::K),
            other => Err(Error::InvalidGrid(format!("unknown sweep axis {other:?}; use lambda or k"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathPoint {
    pub grid_value: f64,
    /// Ridge effective degrees of freedom at the point's `lambda`.
    pub df: f64,
    pub coeffs: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathTrace {
    pub grid_axis: SweepAxis,
    pub points: Vec<PathPoint>,
    /// Grid values whose fit failed, with the error message.
    pub skipped: Vec<(f64, String)>,
}

impl PathTrace {
    pub fn is_complete(&self) -> bool {
        self.skipped.is_empty()
    }

    /// Header `grid_value,df,coef_0,...` then one row per point.
    pub fn to_csv(&self) -> String {
        let width = self.points.first().map_or(0, |p| p.coeffs.len());
        let mut out = String::from("grid_value,df");
        for j in 0..width {
            write!(out, ",coef_{j}").unwrap();
        }
        out.push('\n');
        for p in &self.points {
            write!(out, "{},{}", p.grid_value, p.df).unwrap();
            for c in &p.coeffs {
                write!(out, ",{c}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv()).map_err(|e| Error::Io {
            path: path.to_path_buf(),
            source: e,
        })
    }
}

/// Fits `method` at each value of a strictly increasing sweep, holding the
/// other hyperparameter at the method's configured value. Coefficients of
/// the first target column are recorded.
pub fn coefficient_path(ds: &Dataset, method: &Method, axis: SweepAxis, values: &[f64]) -> Result<PathTrace> {
    if values.is_empty() {
        return Err(Error::InvalidGrid("empty sweep".into()));
    }
    if values.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidGrid("sweep values must be strictly increasing".into()));
    }
    let tuples: Vec<Hyper> = match (axis, method) {
        (SweepAxis::Lambda, Method::Pbridge(cfg)) => values.iter().map(|&v| Hyper::with_k(v, cfg.k)).collect(),
        (SweepAxis::Lambda, Method::Lqa { .. }) => values.iter().map(|&v| Hyper::with_k(v, 1.0)).collect(),
        (SweepAxis::Lambda, Method::ElasticNet(cfg)) => {
            values.iter().map(|&v| Hyper::with_l1_ratio(v, cfg.l1_ratio)).collect()
        }
        (SweepAxis::Lambda, _) => values.iter().map(|&v| Hyper::new(v)).collect(),
        (SweepAxis::K, Method::Pbridge(cfg)) => values.iter().map(|&v| Hyper::with_k(cfg.lambda, v)).collect(),
        (SweepAxis::K, other) => {
            return Err(Error::InvalidGrid(format!("a k sweep needs the pbridge method, not {other}")))
        }
    };
    let fits = fit_tuples(method, &ds.x, &ds.y, &tuples);
    let mut trace = PathTrace {
        grid_axis: axis,
        points: Vec::with_capacity(values.len()),
        skipped: Vec::new(),
    };
    for ((value, tuple), fit) in values.iter().zip(&tuples).zip(fits) {
        match fit {
            Ok(coeffs) => trace.points.push(PathPoint {
                grid_value: *value,
                df: effective_df(&ds.x, tuple.lambda).unwrap_or(f64::NAN),
                coeffs: coeffs.col(0),
            }),
            Err(e) => trace.skipped.push((*value, e.to_string())),
        }
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets::gen_xor_train;
    use crate::estimators::{fit_pbridge, BridgeConfig};

    #[test]
    fn single_point_matches_direct_fit() {
        let ds = gen_xor_train();
        let cfg = BridgeConfig::new(1.5, 0.0);
        let trace = coefficient_path(&ds, &Method::Pbridge(cfg), SweepAxis::K, &[1.5]).unwrap();
        assert_eq!(trace.points.len(), 1);
        let direct = fit_pbridge(&ds.x, &ds.y, &BridgeConfig::new(1.5, 0.0)).unwrap();
        assert_eq!(trace.points[0].coeffs, direct.column(0));
        assert!((trace.points[0].df - 4.0).abs() < 1e-8);
        let csv = trace.to_csv();
        assert!(csv.starts_with("grid_value,df,coef_0,coef_1,"));
        assert_eq!(csv.lines().count(), 2);
    }

    #[test]
    fn sweep_validation() {
        let ds = gen_xor_train();
        let m = Method::Ridge;
        assert!(coefficient_path(&ds, &m, SweepAxis::Lambda, &[]).is_err());
        assert!(coefficient_path(&ds, &m, SweepAxis::Lambda, &[1.0, 1.0]).is_err());
        assert!(coefficient_path(&ds, &m, SweepAxis::K, &[1.0]).is_err());
        assert!(SweepAxis::parse("rho").is_err());
    }

    #[test]
    fn failed_points_are_skipped() {
        let ds = gen_xor_train();
        let m = Method::Pbridge(BridgeConfig::new(1.5, 1.0));
        let trace = coefficient_path(&ds, &m, SweepAxis::K, &[1.0, 1.5]).unwrap();
        assert!(!trace.is_complete());
        assert_eq!(trace.points.len(), 1);
        assert_eq!(trace.skipped[0].0, 1.0);
    }
}
