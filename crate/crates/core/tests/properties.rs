use bridgekit::datasets::{gen_sim, gen_xor_test, gen_xor_train, standardize, unstandardize, Dataset, SimSpec};
use bridgekit::estimators::{
    fit_ols, fit_pbridge_dual, fit_pbridge_primal, fit_ridge, k_measure, BridgeConfig,
};
use bridgekit::evaluation::{accuracy_wta, effective_df, weighted_mse};
use bridgekit::linalg::{abs_pow_mat, min_eigenvalue, signed_pow, solve_regularized};
use bridgekit::Mat;
use proptest::prelude::*;

fn mat(rows: usize, cols: usize) -> impl Strategy<Value = Mat> {
    prop::collection::vec(-3.0..3.0f64, rows * cols).prop_map(move |v| Mat::new(rows, cols, v).unwrap())
}

/// Tall design with a dominant diagonal so XᵀX stays well conditioned.
fn tall(rows: usize, cols: usize) -> impl Strategy<Value = Mat> {
    mat(rows, cols).prop_map(move |m| Mat::from_fn(rows, cols, |i, j| m[(i, j)] + if i == j { 4.0 } else { 0.0 }))
}

fn max_dev(a: &Mat, b: &Mat) -> f64 {
    a.sub(b).max_abs()
}

proptest! {
    #[test]
    fn regularized_inverse_times_matrix_is_identity(b in mat(5, 5)) {
        let mut a = b.gram();
        a.add_scaled_identity(1.0);
        let inv = solve_regularized(&a, 0.0, &Mat::identity(5)).unwrap();
        prop_assert!(max_dev(&a.mul(&inv), &Mat::identity(5)) <= 1e-8);
    }

    #[test]
    fn signed_pow_round_trips(
        mags in prop::collection::vec(-6.0..3.0f64, 1..12),
        signs in prop::collection::vec(any::<bool>(), 12),
        p in prop::sample::select(vec![0.5, 1.0, 2.0]),
    ) {
        let v: Vec<f64> = mags.iter().zip(&signs).map(|(&e, &s)| if s { -(10f64.powf(e)) } else { 10f64.powf(e) }).collect();
        let back = signed_pow(&signed_pow(&v, p), 1.0 / p);
        for (a, b) in v.iter().zip(&back) {
            prop_assert!((a - b).abs() <= 1e-10 * a.abs().max(1.0), "{a} vs {b}");
        }
    }

    #[test]
    fn signed_pow_is_odd(v in prop::collection::vec(-1e3..1e3f64, 1..10), p in 0.05..3.0f64) {
        let neg: Vec<f64> = v.iter().map(|x| -x).collect();
        let lhs = signed_pow(&neg, p);
        let rhs: Vec<f64> = signed_pow(&v, p).iter().map(|x| -x).collect();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn abs_pow_at_one_is_abs(m in mat(3, 4)) {
        prop_assert_eq!(abs_pow_mat(&m, 1.0), m.map(f64::abs));
    }

    #[test]
    fn primal_k2_is_ridge(x in tall(12, 4), y in mat(12, 1), lambda in 0.0..20.0f64) {
        let bridge = fit_pbridge_primal(&x, &y, &BridgeConfig::new(2.0, lambda)).unwrap().coeffs;
        let ridge = fit_ridge(&x, &y, lambda).unwrap().coeffs;
        prop_assert!(max_dev(&bridge, &ridge) <= 1e-10);
    }

    #[test]
    fn dual_k2_interpolates(x in mat(3, 8), y in mat(3, 1)) {
        prop_assume!(min_eigenvalue(&x.outer_gram()).unwrap() > 1e-3);
        let cfg = BridgeConfig::new(2.0, 0.0).with_epsilon_reg(0.0);
        let a = fit_pbridge_dual(&x, &y, &cfg).unwrap().coeffs;
        prop_assert!(max_dev(&x.mul(&a), &y) <= 1e-8);
    }

    #[test]
    fn joint_outputs_equal_separate_fits(
        x in tall(10, 3),
        y in mat(10, 3),
        k in 1.0..2.0f64,
        lambda in 0.0..5.0f64,
    ) {
        let cfg = BridgeConfig::new(k, lambda);
        let joint = fit_pbridge_primal(&x, &y, &cfg).unwrap().coeffs;
        for l in 0..3 {
            let single = fit_pbridge_primal(&x, &Mat::column(&y.col(l)), &cfg).unwrap().coeffs;
            prop_assert_eq!(joint.col(l), single.col(0));
        }
    }

    #[test]
    fn joint_outputs_equal_separate_dual_fits(x in mat(3, 7), y in mat(3, 2), k in 1.1..2.0f64) {
        prop_assume!(min_eigenvalue(&x.outer_gram()).unwrap() > 1e-3);
        let cfg = BridgeConfig::new(k, 0.5);
        let joint = fit_pbridge_dual(&x, &y, &cfg).unwrap().coeffs;
        for l in 0..2 {
            let single = fit_pbridge_dual(&x, &Mat::column(&y.col(l)), &cfg).unwrap().coeffs;
            prop_assert_eq!(joint.col(l), single.col(0));
        }
    }

    #[test]
    fn k_measure_approaches_the_norm(alpha in prop::collection::vec(-3.0..3.0f64, 1..8), k in 1.0..2.0f64) {
        let norm = alpha.iter().map(|a| a.abs().powf(k)).sum::<f64>().powf(1.0 / k);
        let gaps: Vec<f64> = [1e-2, 1e-4, 1e-6, 1e-8].iter().map(|&e| (k_measure(&alpha, k, e) - norm).abs()).collect();
        for w in gaps.windows(2) {
            prop_assert!(w[1] <= w[0], "{gaps:?}");
        }
    }

    #[test]
    fn ols_scales_with_the_target(x in tall(9, 3), y in mat(9, 1), c in prop::sample::select(vec![-4.0, 0.5, 2.0, 8.0])) {
        let base = fit_ols(&x, &y).unwrap().coeffs;
        let scaled = fit_ols(&x, &y.scale(c)).unwrap().coeffs;
        prop_assert_eq!(scaled, base.scale(c));
    }

    #[test]
    fn weighted_mse_is_nonnegative(
        x in mat(8, 3),
        a in prop::collection::vec(-2.0..2.0f64, 3),
        b in prop::collection::vec(-2.0..2.0f64, 3),
    ) {
        prop_assert!(weighted_mse(&a, &b, &x) >= 0.0);
        prop_assert_eq!(weighted_mse(&a, &a, &x), 0.0);
    }

    #[test]
    fn effective_df_decreases_within_bounds(x in tall(10, 4), l1 in 0.01..50.0f64, step in 0.01..50.0f64) {
        let lo = effective_df(&x, l1).unwrap();
        let hi = effective_df(&x, l1 + step).unwrap();
        prop_assert!(hi < lo);
        prop_assert!(lo > 0.0 && lo <= 4.0 + 1e-12);
        prop_assert!((effective_df(&x, 0.0).unwrap() - 4.0).abs() < 1e-9);
    }

    #[test]
    fn wta_accuracy_ignores_a_constant_shift(
        scores in mat(20, 4),
        labels in prop::collection::vec(0usize..4, 20),
        shift in -100.0..100.0f64,
    ) {
        let shifted = scores.map(|s| s + shift);
        prop_assert_eq!(accuracy_wta(&scores, &labels).unwrap(), accuracy_wta(&shifted, &labels).unwrap());
    }

    #[test]
    fn standardize_round_trips(x in mat(7, 3)) {
        let ds = Dataset::unnamed(x.clone(), Mat::zeros(7, 1)).unwrap();
        let z = standardize(&ds).unwrap();
        prop_assert!(max_dev(&unstandardize(&z).x, &x) <= 1e-12);
    }

    #[test]
    fn generators_are_deterministic(seed in any::<u64>(), ex in 1u8..=4) {
        let spec = SimSpec::example(ex).unwrap();
        prop_assert_eq!(gen_sim(&spec, seed).unwrap(), gen_sim(&spec, seed).unwrap());
        prop_assert_eq!(gen_xor_test(seed), gen_xor_test(seed));
    }
}

#[test]
fn xor_training_design_has_full_row_rank() {
    let x = gen_xor_train().x;
    assert_eq!(x.shape(), (4, 10));
    assert!(min_eigenvalue(&x.outer_gram()).unwrap() > 1e-6);
}

#[test]
fn simulated_predictors_are_centered() {
    for ex in 1..=4 {
        let spec = SimSpec::example(ex).unwrap();
        let d = spec.n_features();
        let mut sums = vec![0.0; d];
        let mut count = 0usize;
        for seed in 0..40 {
            let draw = gen_sim(&spec, seed).unwrap();
            for part in [&draw.train, &draw.valid, &draw.test] {
                for i in 0..part.n_samples() {
                    for (s, v) in sums.iter_mut().zip(part.x.row(i)) {
                        *s += v;
                    }
                }
                count += part.n_samples();
            }
        }
        let bound = 5.0 / (count as f64).sqrt();
        for (j, s) in sums.iter().enumerate() {
            assert!((s / count as f64).abs() < bound, "example {ex} column {j}");
        }
    }
}
