mod common;

use dagfoci_core::indep_test::permutation_independence_test;
use rand::Rng;

fn uniform(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(0.0..1.0)).collect()
}

#[test]
fn identical_columns_reach_the_p_value_floor() {
    let mut rng = common::instance_rng(1);
    let x = uniform(&mut rng, 1000);
    let r = permutation_independence_test(&x, &x, 100, 0.05, 3).unwrap();
    assert!(r.reject);
    assert_eq!(r.p_value, 1.0 / 101.0);
}

#[test]
fn zero_permutations_is_an_error() {
    let x = [1.0, 2.0, 3.0];
    assert!(permutation_independence_test(&x, &x, 0, 0.05, 0).is_err());
}

#[test]
fn valid_size_across_levels() {
    let reps = 1000;
    let mut rng = common::instance_rng(2);
    let p_values: Vec<f64> = (0..reps)
        .map(|r| {
            let (a, b) = (uniform(&mut rng, 100), uniform(&mut rng, 100));
            permutation_independence_test(&a, &b, 100, 0.5, r).unwrap().p_value
        })
        .collect();
    for alpha in [0.01, 0.05, 0.1] {
        let rate = p_values.iter().filter(|&&p| p <= alpha).count() as f64 / reps as f64;
        let tol = 3.0 * (alpha * (1.0 - alpha) / reps as f64).sqrt();
        assert!(rate <= alpha + tol, "alpha {alpha}: rate {rate}");
    }
}

#[test]
fn joint_row_permutation_keeps_the_statistic() {
    let mut rng = common::instance_rng(4);
    let a = uniform(&mut rng, 300);
    let b: Vec<f64> = a.iter().map(|v| (5.0 * v).sin() + 0.1 * rng.random_range(0.0..1.0)).collect();
    let mut order: Vec<usize> = (0..300).collect();
    for i in (1..300).rev() {
        order.swap(i, rng.random_range(0..=i));
    }
    let pa: Vec<f64> = order.iter().map(|&i| a[i]).collect();
    let pb: Vec<f64> = order.iter().map(|&i| b[i]).collect();
    let r1 = permutation_independence_test(&a, &b, 50, 0.05, 8).unwrap();
    let r2 = permutation_independence_test(&pa, &pb, 50, 0.05, 8).unwrap();
    assert_eq!(r1.statistic, r2.statistic);
    assert!(r1.p_value >= 1.0 / 51.0);
    assert_eq!(r1, permutation_independence_test(&a, &b, 50, 0.05, 8).unwrap());
}
