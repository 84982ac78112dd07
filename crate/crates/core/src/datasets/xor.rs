use rand::Rng;
use rand_distr::StandardNormal;

use super::{sim::trial_rng, Dataset};
use crate::linalg::Mat;

/// Training inputs; the first two are class 0, the last two class 1.
pub const XOR_CENTERS: [(f64, f64); 4] = [(0.0, 1.0), (2.0, 1.0), (1.0, 0.0), (1.0, 2.0)];
const XOR_LABELS: [f64; 4] = [0.0, 0.0, 1.0, 1.0];
const TEST_PER_CENTER: usize = 50;
const TEST_VARIANCE: f64 = 0.3;

pub const POLY3_NAMES: [&str; 10] = [
    "1", "x1", "x2", "x1^2", "x2^2", "x1*x2", "x1^3", "x2^3", "x1^2*x2", "x1*x2^2",
];

/// Full cubic monomial basis in two variables.
pub fn poly3_features(x1: f64, x2: f64) -> [f64; 10] {
    [
        1.0,
        x1,
        x2,
        x1 * x1,
        x2 * x2,
        x1 * x2,
        x1 * x1 * x1,
        x2 * x2 * x2,
        x1 * x1 * x2,
        x1 * x2 * x2,
    ]
}

fn poly_dataset(points: &[(f64, f64)], labels: &[f64]) -> Dataset {
    let rows: Vec<[f64; 10]> = points.iter().map(|&(a, b)| poly3_features(a, b)).collect();
    let x = Mat::from_rows(&rows).expect("fixed-width rows");
    Dataset::new(
        x,
        Mat::column(labels),
        POLY3_NAMES.iter().map(|s| s.to_string()).collect(),
        vec!["y".to_string()],
    )
    .expect("consistent shapes")
}

/// The four-point XOR training set in the cubic basis (4×10).
pub fn gen_xor_train() -> Dataset {
    poly_dataset(&XOR_CENTERS, &XOR_LABELS)
}

/// 50 Gaussian draws per training point with covariance `0.3·I`, labelled
/// by their center, in center order.
pub fn gen_xor_test(seed: u64) -> Dataset {
    gen_xor_test_with(&mut trial_rng(seed, 0)).0
}

/// Same as [`gen_xor_test`] but drawing from `rng`; also returns the raw
/// `(x1, x2)` points.
pub fn gen_xor_test_with<R: Rng>(rng: &mut R) -> (Dataset, Vec<(f64, f64)>) {
    let sd = TEST_VARIANCE.sqrt();
    let mut points = Vec::with_capacity(4 * TEST_PER_CENTER);
    let mut labels = Vec::with_capacity(4 * TEST_PER_CENTER);
    for (&(c1, c2), &label) in XOR_CENTERS.iter().zip(&XOR_LABELS) {
        for _ in 0..TEST_PER_CENTER {
            let a: f64 = rng.sample(StandardNormal);
            let b: f64 = rng.sample(StandardNormal);
            points.push((c1 + sd * a, c2 + sd * b));
            labels.push(label);
        }
    }
    (poly_dataset(&points, &labels), points)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poly3_examples() {
        assert_eq!(poly3_features(0.0, 0.0), [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(poly3_features(1.0, 2.0), [1.0, 1.0, 2.0, 1.0, 4.0, 2.0, 1.0, 8.0, 2.0, 4.0]);
        assert_eq!(poly3_features(2.0, 1.0), [1.0, 2.0, 1.0, 4.0, 1.0, 2.0, 8.0, 1.0, 4.0, 2.0]);
    }

    #[test]
    fn train_set_layout() {
        let ds = gen_xor_train();
        assert_eq!(ds.x.shape(), (4, 10));
        assert_eq!(ds.y.col(0), vec![0.0, 0.0, 1.0, 1.0]);
        assert_eq!(ds.x.row(2)[1..3], [1.0, 0.0]);
        assert!(ds.x.is_finite());
    }

    #[test]
    fn test_set_layout_and_determinism() {
        let a = gen_xor_test(7);
        assert_eq!(a.x.shape(), (200, 10));
        assert_eq!(a, gen_xor_test(7));
        assert_ne!(a.x, gen_xor_test(8).x);
        assert!(a.y.col(0)[..50].iter().all(|v| *v == 0.0));
        assert!(a.y.col(0)[100..].iter().all(|v| *v == 1.0));
    }

    #[test]
    fn test_set_covariance() {
        let (_, pts) = gen_xor_test_with(&mut trial_rng(3, 0));
        for (c, chunk) in pts.chunks(TEST_PER_CENTER).enumerate() {
            let n = chunk.len() as f64;
            let m1 = chunk.iter().map(|p| p.0).sum::<f64>() / n;
            let m2 = chunk.iter().map(|p| p.1).sum::<f64>() / n;
            let s11 = chunk.iter().map(|p| (p.0 - m1).powi(2)).sum::<f64>() / (n - 1.0);
            let s22 = chunk.iter().map(|p| (p.1 - m2).powi(2)).sum::<f64>() / (n - 1.0);
            let s12 = chunk.iter().map(|p| (p.0 - m1) * (p.1 - m2)).sum::<f64>() / (n - 1.0);
            assert!((s11 - 0.3).abs() < 0.08, "center {c}: {s11}");
            assert!((s22 - 0.3).abs() < 0.08, "center {c}: {s22}");
            assert!(s12.abs() < 0.08, "center {c}: {s12}");
        }
    }
}
