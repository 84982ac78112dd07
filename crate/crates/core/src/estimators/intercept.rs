use crate::error::{Error, Result};
use crate::linalg::Mat;

/// Predictors with the leading intercept column stripped and all columns
/// centered, together with the means needed to recover the intercept.
pub(crate) struct Centered {
    pub x: Mat,
    pub y: Mat,
    x_mean: Vec<f64>,
    y_mean: Vec<f64>,
}

pub(crate) fn center_for_intercept(x: &Mat, y: &Mat) -> Result<Centered> {
    if x.cols() < 2 {
        return Err(Error::InvalidParameter(
            "an unpenalized intercept needs at least one predictor besides column 0".into(),
        ));
    }
    if (0..x.rows()).any(|i| x[(i, 0)] != 1.0) {
        return Err(Error::InvalidParameter(
            "an unpenalized intercept requires column 0 to be all ones".into(),
        ));
    }
    let m = x.rows() as f64;
    let d = x.cols() - 1;
    let x_mean: Vec<f64> = (1..x.cols())
        .map(|j| (0..x.rows()).map(|i| x[(i, j)]).sum::<f64>() / m)
        .collect();
    let y_mean: Vec<f64> = (0..y.cols())
        .map(|l| (0..y.rows()).map(|i| y[(i, l)]).sum::<f64>() / m)
        .collect();
    let xc = Mat::from_fn(x.rows(), d, |i, j| x[(i, j + 1)] - x_mean[j]);
    let yc = Mat::from_fn(y.rows(), y.cols(), |i, l| y[(i, l)] - y_mean[l]);
    Ok(Centered {
        x: xc,
        y: yc,
        x_mean,
        y_mean,
    })
}

impl Centered {
    /// Prepends the intercept row to slope coefficients fitted on the
    /// centered data.
    pub fn restore(&self, slopes: &Mat) -> Mat {
        let d = slopes.rows();
        Mat::from_fn(d + 1, slopes.cols(), |i, l| {
            if i == 0 {
                self.y_mean[l]
                    - (0..d)
                        .map(|j| self.x_mean[j] * slopes[(j, l)])
                        .sum::<f64>()
            } else {
                slopes[(i - 1, l)]
            }
        })
    }
}
