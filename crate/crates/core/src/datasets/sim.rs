use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::Dataset;
use crate::error::{Error, Result};
use crate::linalg::{cholesky, Mat};

/// Deterministic generator for `(seed, stream)`; streams give independent
/// sequences, so trial `t` always sees the same draws regardless of
/// scheduling.
pub fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Correlation {
    /// `corr(x_i, x_j) = rho^|i-j|`.
    Autoregressive(f64),
    /// `corr(x_i, x_j) = rho` for `i != j`.
    Equicorrelated(f64),
    /// `groups` blocks of `group_size` predictors, each a shared standard
    /// normal factor plus independent noise of standard deviation
    /// `noise_sd`; remaining predictors are independent standard normals.
    Latent {
        groups: usize,
        group_size: usize,
        noise_sd: f64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimSpec {
    pub example_id: u8,
    pub n_train: usize,
    pub n_valid: usize,
    pub n_test: usize,
    pub true_alpha: Vec<f64>,
    pub sigma: f64,
    pub correlation: Correlation,
}

impl SimSpec {
    /// The four standard simulation designs.
    pub fn example(id: u8) -> Result<Self> {
        let spec = match id {
            1 => Self {
                example_id: 1,
                n_train: 20,
                n_valid: 20,
                n_test: 200,
                true_alpha: vec![3.0, 1.5, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0],
                sigma: 3.0,
                correlation: Correlation::Autoregressive(0.5),
            },
            2 => Self {
                example_id: 2,
                n_train: 20,
                n_valid: 20,
                n_test: 200,
                true_alpha: vec![0.85; 8],
                sigma: 3.0,
                correlation: Correlation::Autoregressive(0.5),
            },
            3 => Self {
                example_id: 3,
                n_train: 100,
                n_valid: 100,
                n_test: 400,
                true_alpha: [0.0, 2.0, 0.0, 2.0]
                    .iter()
                    .flat_map(|v| std::iter::repeat_n(*v, 10))
                    .collect(),
                sigma: 15.0,
                correlation: Correlation::Equicorrelated(0.5),
            },
            4 => Self {
                example_id: 4,
                n_train: 50,
                n_valid: 50,
                n_test: 400,
                true_alpha: std::iter::repeat_n(3.0, 15)
                    .chain(std::iter::repeat_n(0.0, 25))
                    .collect(),
                sigma: 15.0,
                correlation: Correlation::Latent {
                    groups: 3,
                    group_size: 5,
                    noise_sd: 0.1,
                },
            },
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "simulation example must be 1..=4, got {id}"
                )))
            }
        };
        Ok(spec)
    }

    pub fn n_features(&self) -> usize {
        self.true_alpha.len()
    }

    fn validate(&self) -> Result<()> {
        if self.n_train == 0 || self.n_valid == 0 || self.n_test == 0 {
            return Err(Error::InvalidParameter("split sizes must be positive".into()));
        }
        if !(self.sigma > 0.0) || self.true_alpha.is_empty() {
            return Err(Error::InvalidParameter(
                "sigma must be positive and alpha nonempty".into(),
            ));
        }
        if let Correlation::Latent {
            groups, group_size, ..
        } = self.correlation
        {
            if groups * group_size > self.n_features() {
                return Err(Error::InvalidParameter(
                    "latent blocks exceed the predictor count".into(),
                ));
            }
        }
        Ok(())
    }

    /// Lower Cholesky factor of the predictor correlation, when the scheme
    /// is a plain correlation matrix.
    fn factor(&self) -> Result<Option<Mat>> {
        let d = self.n_features();
        let corr = match self.correlation {
            Correlation::Autoregressive(rho) => {
                Mat::from_fn(d, d, |i, j| rho.powi((i as i32 - j as i32).abs()))
            }
            Correlation::Equicorrelated(rho) => {
                Mat::from_fn(d, d, |i, j| if i == j { 1.0 } else { rho })
            }
            Correlation::Latent { .. } => return Ok(None),
        };
        cholesky(&corr)
            .map(Some)
            .ok_or_else(|| Error::InvalidParameter("correlation matrix is not positive definite".into()))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimDraw {
    pub train: Dataset,
    pub valid: Dataset,
    pub test: Dataset,
}

/// Draws the train/validation/test splits of `spec` from stream 0 of `seed`.
pub fn gen_sim(spec: &SimSpec, seed: u64) -> Result<SimDraw> {
    gen_sim_with(spec, &mut trial_rng(seed, 0))
}

pub fn gen_sim_with<R: Rng>(spec: &SimSpec, rng: &mut R) -> Result<SimDraw> {
    spec.validate()?;
    let factor = spec.factor()?;
    let mut split = |n: usize| -> Result<Dataset> {
        let x = draw_predictors(spec, factor.as_ref(), n, rng);
        let y: Vec<f64> = x
            .mul_vec(&spec.true_alpha)
            .into_iter()
            .map(|mean| {
                let e: f64 = rng.sample(StandardNormal);
                mean + spec.sigma * e
            })
            .collect();
        Dataset::unnamed(x, Mat::column(&y))
    };
    Ok(SimDraw {
        train: split(spec.n_train)?,
        valid: split(spec.n_valid)?,
        test: split(spec.n_test)?,
    })
}

/// Draws `n` predictor rows; only the design, no response.
pub(crate) fn draw_predictors<R: Rng>(spec: &SimSpec, factor: Option<&Mat>, n: usize, rng: &mut R) -> Mat {
    let d = spec.n_features();
    let mut x = Mat::zeros(n, d);
    let mut z = vec![0.0; d];
    for i in 0..n {
        match (&spec.correlation, factor) {
            (
                Correlation::Latent {
                    groups,
                    group_size,
                    noise_sd,
                },
                _,
            ) => {
                let factors: Vec<f64> = (0..*groups).map(|_| rng.sample(StandardNormal)).collect();
                for j in 0..d {
                    let e: f64 = rng.sample(StandardNormal);
                    let g = j / group_size;
                    x[(i, j)] = if g < *groups {
                        factors[g] + noise_sd * e
                    } else {
                        e
                    };
                }
            }
            (_, Some(l)) => {
                for v in z.iter_mut() {
                    *v = rng.sample(StandardNormal);
                }
                for j in 0..d {
                    x[(i, j)] = (0..=j).map(|k| l[(j, k)] * z[k]).sum();
                }
            }
            (_, None) => unreachable!("correlation schemes other than Latent carry a factor"),
        }
    }
    x
}

/// Fixed design matrix for repeated-noise experiments.
pub(crate) fn draw_design<R: Rng>(spec: &SimSpec, n: usize, rng: &mut R) -> Result<Mat> {
    spec.validate()?;
    Ok(draw_predictors(spec, spec.factor()?.as_ref(), n, rng))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_shapes() {
        let expect = [(1, 8, 20, 20, 200), (2, 8, 20, 20, 200), (3, 40, 100, 100, 400), (4, 40, 50, 50, 400)];
        for (id, d, a, b, c) in expect {
            let spec = SimSpec::example(id).unwrap();
            let draw = gen_sim(&spec, 11).unwrap();
            assert_eq!(draw.train.x.shape(), (a, d));
            assert_eq!(draw.valid.x.shape(), (b, d));
            assert_eq!(draw.test.x.shape(), (c, d));
        }
        assert!(SimSpec::example(5).is_err());
    }

    #[test]
    fn example_four_alpha() {
        let a = SimSpec::example(4).unwrap().true_alpha;
        assert_eq!(a.len(), 40);
        assert!(a[..15].iter().all(|v| *v == 3.0) && a[15..].iter().all(|v| *v == 0.0));
    }

    #[test]
    fn deterministic_per_seed_and_stream() {
        let spec = SimSpec::example(1).unwrap();
        assert_eq!(gen_sim(&spec, 5).unwrap(), gen_sim(&spec, 5).unwrap());
        let a = gen_sim_with(&spec, &mut trial_rng(5, 1)).unwrap();
        let b = gen_sim_with(&spec, &mut trial_rng(5, 2)).unwrap();
        assert_ne!(a.train.x, b.train.x);
    }

    #[test]
    fn autoregressive_correlation_at_lag_two() {
        let spec = SimSpec::example(1).unwrap();
        let x = draw_design(&spec, 100_000, &mut trial_rng(1, 0)).unwrap();
        let n = x.rows() as f64;
        let (c0, c2) = (x.col(0), x.col(2));
        let cov = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(u, v)| u * v).sum::<f64>() / n;
        let r = cov(&c0, &c2) / (cov(&c0, &c0) * cov(&c2, &c2)).sqrt();
        assert!((r - 0.25).abs() < 0.02, "{r}");
        for j in 0..8 {
            let m = x.col(j).iter().sum::<f64>() / n;
            assert!(m.abs() < 5.0 / n.sqrt());
        }
    }

    #[test]
    fn latent_blocks_are_highly_correlated() {
        let spec = SimSpec::example(4).unwrap();
        let x = draw_design(&spec, 20_000, &mut trial_rng(2, 0)).unwrap();
        let n = x.rows() as f64;
        let corr = |i: usize, j: usize| {
            let (a, b) = (x.col(i), x.col(j));
            let c = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(p, q)| p * q).sum::<f64>() / n;
            c(&a, &b) / (c(&a, &a) * c(&b, &b)).sqrt()
        };
        assert!(corr(0, 4) > 0.98);
        assert!(corr(0, 5).abs() < 0.05);
        assert!(corr(20, 30).abs() < 0.05);
    }
}
