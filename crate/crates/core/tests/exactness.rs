//! Exact samples compared with closed forms and independent samplers.

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use domcftp::cftp::{run_cftp, CftpConfig};
use domcftp::rng::{derive_seed, stream_rng};
use domcftp::spatial::{AreaInteractionModel, Grain, MultiscaleParams, Point, Resolution, Window};
use domcftp::wavelet::{neighbourhood, CoefficientTree, HyperParams, LatticeModel};

fn cftp_counts(model: &AreaInteractionModel, draws: u64, seed: u64) -> Vec<usize> {
    (0..draws)
        .map(|i| run_cftp(model, model.space(), derive_seed(seed, i), CftpConfig::default()).unwrap().points.len())
        .collect()
}

/// Rejection from the dominating Poisson process using the full density.
fn rejection_counts(model: &AreaInteractionModel, draws: u64, seed: u64) -> Vec<usize> {
    let w = model.window();
    let dom = model.dominating_rate();
    (0..draws)
        .map(|i| {
            let mut rng = stream_rng(derive_seed(seed, i), 7);
            loop {
                let n = Poisson::new(dom * w.area()).unwrap().sample(&mut rng) as usize;
                let pts: Vec<Point> = (0..n)
                    .map(|_| Point::new(w.x0 + w.width * rng.random::<f64>(), w.y0 + w.height * rng.random::<f64>()))
                    .collect();
                let log_acc = model.log_unnormalized_density(&pts) - n as f64 * dom.ln();
                assert!(log_acc <= 1e-9);
                if rng.random::<f64>().ln() < log_acc {
                    return n;
                }
            }
        })
        .collect()
}

/// Two-sample chi-square homogeneity test on counts, pooling sparse tails.
fn homogeneity_p(a: &[usize], b: &[usize]) -> f64 {
    let top = a.iter().chain(b).copied().max().unwrap();
    let mut bins: Vec<(f64, f64)> = Vec::new();
    let mut acc = (0.0, 0.0);
    for k in 0..=top {
        acc.0 += a.iter().filter(|&&c| c == k).count() as f64;
        acc.1 += b.iter().filter(|&&c| c == k).count() as f64;
        if acc.0 + acc.1 >= 20.0 {
            bins.push(acc);
            acc = (0.0, 0.0);
        }
    }
    if acc.0 + acc.1 > 0.0 {
        let last = bins.last_mut().unwrap();
        last.0 += acc.0;
        last.1 += acc.1;
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let stat: f64 = bins
        .iter()
        .map(|(x, y)| {
            let tot = x + y;
            let (ea, eb) = (tot * na / (na + nb), tot * nb / (na + nb));
            (x - ea).powi(2) / ea + (y - eb).powi(2) / eb
        })
        .sum();
    ChiSquared::new((bins.len() - 1) as f64).unwrap().sf(stat)
}

#[test]
fn repulsive_standard_model_matches_rejection() {
    let window = Window::unit_square();
    let model = AreaInteractionModel::standard(window, 6.0, 0.2, Grain::new(0.15).unwrap(), Resolution::PerGrain(6.0)).unwrap();
    let a = cftp_counts(&model, 4000, 1);
    let b = rejection_counts(&model, 4000, 2);
    let p = homogeneity_p(&a, &b);
    assert!(p > 0.001, "p = {p}");
}

#[test]
fn attractive_standard_model_matches_rejection() {
    let window = Window::unit_square();
    let model = AreaInteractionModel::standard(window, 1.5, 4.0, Grain::new(0.2).unwrap(), Resolution::PerGrain(6.0)).unwrap();
    let a = cftp_counts(&model, 4000, 3);
    let b = rejection_counts(&model, 4000, 4);
    let p = homogeneity_p(&a, &b);
    assert!(p > 0.001, "p = {p}");
}

#[test]
fn three_scale_model_matches_rejection() {
    let params = MultiscaleParams::from_log10(2.0, 0.4, -0.3, 0.2, 0.08)
        .unwrap()
        .with_third(-0.2, 0.3)
        .unwrap();
    let model = AreaInteractionModel::multiscale(Window::unit_square(), &params, Resolution::PerGrain(5.0)).unwrap();
    let a = cftp_counts(&model, 4000, 5);
    let b = rejection_counts(&model, 4000, 6);
    let p = homogeneity_p(&a, &b);
    assert!(p > 0.001, "p = {p}");
}

#[test]
fn single_site_lattice_posterior_has_closed_form() {
    // One detail coefficient: ξ has pmf ∝ λ^k/k! γ^{-|B|·1{k>0}} N(d̂; 0, σ² + τ²k).
    let hyper = HyperParams { lambda: 0.8, gamma: 1.5, ..HyperParams::new(1.0) };
    let dhat = 2.2;
    let tree = CoefficientTree::new(1, 0.0, vec![dhat]).unwrap();
    let model = LatticeModel::new(&tree, hyper).unwrap();
    let b = neighbourhood(0, 0, 1).len() as i32;
    let weight = |k: u32| {
        let v = 1.0 + k as f64;
        let mut fact = 1.0;
        for i in 1..=k {
            fact *= i as f64;
        }
        let cover = if k > 0 { hyper.gamma.powi(-b) } else { 1.0 };
        hyper.lambda.powi(k as i32) / fact * cover * (-dhat * dhat / (2.0 * v)).exp() / v.sqrt()
    };
    let weights: Vec<f64> = (0..40).map(weight).collect();
    let z: f64 = weights.iter().sum();
    let space = model.space().unwrap().unwrap();
    let draws = 20_000;
    let mut hist = vec![0.0; 40];
    for i in 0..draws {
        let s = run_cftp(&model, space.clone(), derive_seed(9, i), CftpConfig::default()).unwrap();
        hist[s.points.len().min(39)] += 1.0;
    }
    let mut stat = 0.0;
    let mut df = 0;
    let mut tail = (0.0, 0.0);
    for k in 0..40 {
        let e = weights[k] / z * draws as f64;
        if e < 10.0 {
            tail.0 += hist[k];
            tail.1 += e;
            continue;
        }
        stat += (hist[k] - e).powi(2) / e;
        df += 1;
    }
    stat += (tail.0 - tail.1).powi(2) / tail.1;
    let p = ChiSquared::new(df as f64).unwrap().sf(stat);
    assert!(p > 0.001, "chi-square {stat} on {df} df");
}

#[test]
fn samples_are_reproducible_and_seed_dependent() {
    let params = MultiscaleParams::from_log10(40.0, 0.5, -1.0, 0.06, 0.02).unwrap();
    let model = AreaInteractionModel::multiscale(Window::unit_square(), &params, Resolution::default()).unwrap();
    let a = run_cftp(&model, model.space(), 42, CftpConfig::default()).unwrap();
    let b = run_cftp(&model, model.space(), 42, CftpConfig::default()).unwrap();
    let c = run_cftp(&model, model.space(), 43, CftpConfig::default()).unwrap();
    assert_eq!(a.points, b.points);
    assert_eq!(a.ids, b.ids);
    assert_ne!(a.ids, c.ids);
}

#[test]
fn starting_horizon_does_not_change_the_sample() {
    // Any horizon that coalesces gives the same time-0 state.
    let params = MultiscaleParams::from_log10(40.0, 0.5, -1.0, 0.06, 0.02).unwrap();
    let model = AreaInteractionModel::multiscale(Window::unit_square(), &params, Resolution::default()).unwrap();
    for seed in 0..20 {
        let a = run_cftp(&model, model.space(), seed, CftpConfig { initial_horizon: 1.0, max_doublings: 30 }).unwrap();
        let b = run_cftp(&model, model.space(), seed, CftpConfig { initial_horizon: 64.0, max_doublings: 30 }).unwrap();
        assert_eq!(a.ids, b.ids, "seed {seed}");
    }
}
