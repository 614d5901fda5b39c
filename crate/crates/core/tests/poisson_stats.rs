//! Summary statistics of Poisson patterns against their theoretical values.

use domcftp::rng::derive_seed;
use domcftp::spatial::{SpatialPattern, Window};
use domcftp::stats::{calibrate_t, estimate_l, estimate_t, transform_t};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn unit() -> Window {
    Window::new(0.0, 0.0, 1.0, 1.0).unwrap()
}

fn poisson(seed: u64) -> SpatialPattern {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    SpatialPattern::poisson(unit(), 100.0, &mut rng).unwrap()
}

fn grid() -> Vec<f64> {
    (0..=10).map(|i| 0.05 + 0.01 * i as f64).collect()
}

/// Pointwise mean and standard error across curves.
fn mean_se(curves: &[Vec<f64>], j: usize) -> (f64, f64) {
    let n = curves.len() as f64;
    let mean = curves.iter().map(|c| c[j]).sum::<f64>() / n;
    let var = curves.iter().map(|c| (c[j] - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[test]
fn l_minus_t_has_zero_mean() {
    let r = grid();
    let curves: Vec<Vec<f64>> = (0..200)
        .map(|s| {
            let l = estimate_l(&poisson(derive_seed(1, s)), &r).unwrap();
            l.values.iter().zip(&r).map(|(v, t)| v - t).collect()
        })
        .collect();
    for (j, t) in r.iter().enumerate() {
        let (m, se) = mean_se(&curves, j);
        assert!(m.abs() < 3.0 * se, "t = {t}: mean {m}, se {se}");
    }
}

#[test]
fn t_is_proportional_to_r_to_the_fourth() {
    let r = grid();
    let curves: Vec<Vec<f64>> = (0..200)
        .map(|s| {
            let t = estimate_t(&poisson(derive_seed(2, s)), &r).unwrap();
            t.values.iter().zip(&r).map(|(v, t)| v / t.powi(4)).collect()
        })
        .collect();
    let ratios: Vec<f64> = (0..r.len()).map(|j| mean_se(&curves, j).0).collect();
    let m = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let sd = (ratios.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (ratios.len() - 1) as f64).sqrt();
    assert!(sd / m < 0.2, "coefficient of variation {}", sd / m);
}

/// Transformed T curves for fresh patterns, with `c` calibrated on
/// independent ones.
fn transformed_curves(r: &[f64]) -> Vec<Vec<f64>> {
    let cal = calibrate_t(unit(), 100.0, r, 200, 3).unwrap();
    (0..500)
        .map(|s| {
            let t = estimate_t(&poisson(derive_seed(4, s)), r).unwrap();
            transform_t(&t, cal.c).unwrap().values
        })
        .collect()
}

#[test]
fn transformed_t_is_nearly_unbiased() {
    let r = grid();
    let curves = transformed_curves(&r);
    let averaged: Vec<Vec<f64>> = curves.iter().map(|c| vec![c.iter().sum::<f64>() / c.len() as f64]).collect();
    let (m, se) = mean_se(&averaged, 0);
    assert!(m.abs() < 3.0 * se, "grid average: mean {m}, se {se}");
    for (j, t) in r.iter().enumerate() {
        let (m, _) = mean_se(&curves, j);
        assert!(m.abs() < 0.05 * t, "t = {t}: mean {m}");
    }
}

// A single multiple cannot remove the fourth-root bias where triples are
// rare; at this intensity the mean sits 3 to 4 s.e. below zero for t < 0.07.
#[test]
#[ignore = "pointwise fourth-root bias exceeds 3 s.e. at small t"]
fn transformed_t_has_pointwise_zero_mean() {
    let r = grid();
    let curves = transformed_curves(&r);
    for (j, t) in r.iter().enumerate() {
        let (m, se) = mean_se(&curves, j);
        assert!(m.abs() < 3.0 * se, "t = {t}: mean {m}, se {se}");
    }
}
