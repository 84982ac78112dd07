use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::fitting::{fit_tuples, Hyper, Method};
use crate::datasets::sim::draw_design;
use crate::datasets::{trial_rng, SimSpec};
use crate::error::{Error, Result};
use crate::linalg::Mat;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BiasReport {
    /// Mean of `â − a` over trials.
    pub bias: Vec<f64>,
    /// Standard error of each mean.
    pub sem: Vec<f64>,
    pub trials: usize,
}

impl BiasReport {
    /// Largest `|bias_j| / sem_j`.
    pub fn max_t(&self) -> f64 {
        self.bias
            .iter()
            .zip(&self.sem)
            .map(|(b, s)| if *s > 0.0 { b.abs() / s } else if *b == 0.0 { 0.0 } else { f64::INFINITY })
            .fold(0.0, f64::max)
    }

    /// True when some coordinate's bias exceeds `z` standard errors.
    pub fn is_significant(&self, z: f64) -> bool {
        self.max_t() > z
    }
}

/// Monte-Carlo bias of `method` at `hyper` on the example's training design.
/// The design is drawn once from stream 0; trial `t` redraws only the noise
/// from stream `t + 1`.
pub fn empirical_bias(example_id: u8, method: &Method, hyper: Hyper, trials: usize, seed: u64) -> Result<BiasReport> {
    if trials < 100 {
        return Err(Error::InvalidParameter(format!("bias estimation needs at least 100 trials, got {trials}")));
    }
    let spec = SimSpec::example(example_id)?;
    let x = draw_design(&spec, spec.n_train, &mut trial_rng(seed, 0))?;
    let mean = x.mul_vec(&spec.true_alpha);
    let d = spec.n_features();
    let mut sum = vec![0.0; d];
    let mut sum_sq = vec![0.0; d];
    for t in 0..trials {
        let mut rng = trial_rng(seed, t as u64 + 1);
        let y: Vec<f64> = mean
            .iter()
            .map(|m| {
                let e: f64 = rng.sample(StandardNormal);
                m + spec.sigma * e
            })
            .collect();
        let fit = fit_tuples(method, &x, &Mat::column(&y), &[hyper]).pop().expect("one tuple")?;
        for j in 0..d {
            let err = fit[(j, 0)] - spec.true_alpha[j];
            sum[j] += err;
            sum_sq[j] += err * err;
        }
    }
    let n = trials as f64;
    let bias: Vec<f64> = sum.iter().map(|s| s / n).collect();
    let sem = sum_sq
        .iter()
        .zip(&bias)
        .map(|(sq, b)| ((sq / n - b * b).max(0.0) * n / (n - 1.0) / n).sqrt())
        .collect();
    Ok(BiasReport { bias, sem, trials })
}
