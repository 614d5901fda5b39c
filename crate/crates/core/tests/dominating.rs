//! The dominating process is a stationary spatial birth-death process whose
//! cross-sections are Poisson.

use domcftp::cftp::{simulate_dominating, Space};
use domcftp::spatial::{Point, UniformRate, Window};

fn space() -> UniformRate {
    UniformRate::new(Window::new(0.0, 0.0, 2.0, 1.0).unwrap(), 4.0).unwrap()
}

#[test]
fn cross_sections_are_poisson_at_every_time() {
    let total = space().total_rate();
    assert_eq!(total, 8.0);
    let n = 3000;
    for t in [0.0, -0.7, -2.5, -6.0] {
        let counts: Vec<f64> = (0..n)
            .map(|s| simulate_dominating(space(), 6.0, s).unwrap().configuration_at(t).count() as f64)
            .collect();
        let mean = counts.iter().sum::<f64>() / n as f64;
        let var = counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        let se = (total / n as f64).sqrt();
        assert!((mean - total).abs() < 4.0 * se, "t = {t}: mean {mean}");
        // Var of the sample variance of Poisson(8) is about (8 + 2·64)/n.
        let se_var = ((total + 2.0 * total * total) / n as f64).sqrt();
        assert!((var - total).abs() < 4.0 * se_var, "t = {t}: variance {var}");
    }
}

#[test]
fn void_probability_of_a_unit_mass_region() {
    // The left quarter of the window carries mean 2; a region of mean 1 is
    // empty with probability e^-1.
    let n = 6000;
    let empty = (0..n)
        .filter(|&s| {
            simulate_dominating(space(), 1.0, 1000 + s)
                .unwrap()
                .configuration_at(-0.5)
                .all(|e| !(e.site.x < 0.25 && e.site.y < 1.0))
        })
        .count();
    let p = empty as f64 / n as f64;
    let expected = (-1.0f64).exp();
    let se = (expected * (1.0 - expected) / n as f64).sqrt();
    assert!((p - expected).abs() < 4.0 * se, "void probability {p}");
}

#[test]
fn lifetimes_are_unit_exponential() {
    let traj = simulate_dominating(space(), 200.0, 77).unwrap();
    let lives: Vec<f64> = traj
        .events()
        .iter()
        .filter_map(|e| e.death.map(|d| d - e.birth))
        .collect();
    let n = lives.len() as f64;
    assert!(n > 1000.0);
    let mean = lives.iter().sum::<f64>() / n;
    assert!((mean - 1.0).abs() < 4.0 / n.sqrt(), "mean lifetime {mean}");
}

#[test]
fn sites_are_uniform_over_the_window() {
    let traj = simulate_dominating(space(), 100.0, 5).unwrap();
    let pts: Vec<&Point> = traj.events().iter().map(|e| &e.site).collect();
    let n = pts.len() as f64;
    let left = pts.iter().filter(|p| p.x < 1.0).count() as f64 / n;
    let low = pts.iter().filter(|p| p.y < 0.5).count() as f64 / n;
    let se = (0.25 / n).sqrt();
    assert!((left - 0.5).abs() < 4.0 * se && (low - 0.5).abs() < 4.0 * se);
    assert!(pts.iter().all(|p| (0.0..=2.0).contains(&p.x) && (0.0..=1.0).contains(&p.y)));
}
