use std::path::Path;
use std::process::{Command, Output};
use std::time::Instant;

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_domcftp"))
        .args(args)
        .env_remove("DOMCFTP_WORKERS")
        .output()
        .expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn read_csv(p: &Path) -> Vec<Vec<String>> {
    let text = std::fs::read_to_string(p).unwrap();
    text.lines().map(|l| l.split(',').map(str::to_string).collect()).collect()
}

fn write(p: &Path, text: &str) {
    std::fs::write(p, text).unwrap();
}

#[test]
fn missing_data_file_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = cli(&["envelope", "--data", path(&dir.path().join("nope.csv")), "--set", "lambda=10"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nope.csv"));
}

#[test]
fn bad_settings_are_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    write(&cfg, "lamda = 3.0\n");
    assert_eq!(cli(&["simulate", "--config", path(&cfg)]).status.code(), Some(2));
    // No intensity given.
    assert_eq!(cli(&["simulate", "--out", path(dir.path())]).status.code(), Some(2));
    // Attractive scale with gamma below one.
    let out = cli(&["simulate", "--set", "lambda=5", "--set", "gamma1=0.5", "--set", "r1=0.1", "--out", path(dir.path())]);
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_domcftp"))
        .args(["selftest", "--draws", "100"])
        .env("DOMCFTP_WORKERS", "many")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn poisson_simulation_and_config_echo() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let out = cli(&[
        "simulate", "--set", "lambda=50", "--replicates", "4", "--seed", "11", "--svg", "--out", path(&a),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let runs = read_csv(&a.join("runs.csv"));
    assert_eq!(runs[0], ["replicate", "seed", "status", "points", "horizon", "doublings", "births"]);
    assert_eq!(runs.len(), 5);
    for (i, row) in runs[1..].iter().enumerate() {
        assert_eq!(row[2], "ok");
        let pts = read_csv(&a.join(format!("pattern_{i:03}.csv")));
        assert_eq!(pts[0], ["x", "y"]);
        assert_eq!(pts.len() - 1, row[3].parse::<usize>().unwrap());
        assert!(a.join(format!("pattern_{i:03}.svg")).exists());
    }
    let echo = std::fs::read_to_string(a.join("config.resolved.toml")).unwrap();
    assert!(echo.contains("dominating_rate = 50.0"), "{echo}");
    assert!(echo.contains("lower_keep_probability = 1.0"), "{echo}");

    // The echo alone reproduces the run.
    let b = dir.path().join("b");
    let out = cli(&["simulate", "--config", path(&a.join("config.resolved.toml")), "--out", path(&b)]);
    assert!(out.status.success());
    for i in 0..4 {
        let name = format!("pattern_{i:03}.csv");
        assert_eq!(std::fs::read(a.join(&name)).unwrap(), std::fs::read(b.join(&name)).unwrap());
    }
}

#[test]
fn non_coalescence_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let out = cli(&[
        "simulate", "--set", "lambda=200", "--set", "log10_gamma1=2", "--set", "r1=0.1", "--set",
        "initial_horizon=1e-6", "--set", "max_doublings=0", "--replicates", "2", "--out", path(dir.path()),
    ]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    let runs = read_csv(&dir.path().join("runs.csv"));
    assert!(runs[1..].iter().all(|r| r[2] == "non-coalescence"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("replicate 0"));
}

#[test]
fn poisson_data_sits_inside_poisson_envelope() {
    let dir = tempfile::tempdir().unwrap();
    let sim = dir.path().join("sim");
    assert!(cli(&["simulate", "--set", "lambda=100", "--seed", "5", "--out", path(&sim)]).status.success());
    let env = dir.path().join("env");
    let out = cli(&[
        "envelope", "--data", path(&sim.join("pattern_000.csv")), "--set", "lambda=100", "--sims", "99", "--stat", "L",
        "--seed", "6", "--out", path(&env),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = read_csv(&env.join("envelope_L.csv"));
    assert_eq!(rows[0], ["r", "data", "min", "mean", "max"]);
    let inside = rows[1..]
        .iter()
        .filter(|r| {
            let v: Vec<f64> = r.iter().map(|x| x.parse().unwrap()).collect();
            v[2] <= v[1] && v[1] <= v[4]
        })
        .count();
    let frac = inside as f64 / (rows.len() - 1) as f64;
    assert!(frac >= 0.95, "coverage {frac}");
    assert!(env.join("envelope_L.svg").exists());
    assert!(!env.join("envelope_T.csv").exists());
}

#[test]
fn envelope_writes_calibrated_t() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data.csv");
    let pts: String = (0..40).map(|i| format!("{},{}\n", (i as f64 * 0.618) % 1.0, (i as f64 * 0.377 + 0.1) % 1.0)).collect();
    write(&data, &format!("x,y\n{pts}"));
    let out = cli(&[
        "envelope", "--data", path(&data), "--set", "lambda=40", "--set", "calibration_sims=20", "--set", "r_points=32",
        "--sims", "5", "--out", path(dir.path()),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("envelope_L.csv").exists());
    assert_eq!(read_csv(&dir.path().join("envelope_T.csv")).len(), 33);
    let echo = std::fs::read_to_string(dir.path().join("config.resolved.toml")).unwrap();
    assert!(echo.contains("calibration_c"));
    assert!(echo.contains("data_intensity = 40.0"));
}

#[test]
fn data_outside_the_window_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data.csv");
    write(&data, "x,y\n0.5,0.5\n1.5,0.5\n");
    let out = cli(&["envelope", "--data", path(&data), "--set", "lambda=10", "--out", path(dir.path())]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn denoising_a_noisy_constant_is_nearly_constant() {
    let dir = tempfile::tempdir().unwrap();
    let signal = dir.path().join("s.csv");
    // Deterministic pseudo-noise of standard deviation about 0.1.
    let values: Vec<f64> = (0..128).map(|i| 2.0 + 0.1 * ((i * 7919 % 211) as f64 / 211.0 - 0.5) * 3.46).collect();
    write(&signal, &values.iter().map(|v| format!("{v}\n")).collect::<String>());
    let out = cli(&["denoise", "--signal", path(&signal), "--sigma", "0.1", "--wavelet", "haar", "--out", path(dir.path())]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = read_csv(&dir.path().join("estimate.csv"));
    assert_eq!(rows[0], ["index", "observed", "estimate"]);
    let est: Vec<f64> = rows[1..].iter().map(|r| r[2].parse().unwrap()).collect();
    let spread = est.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - est.iter().cloned().fold(f64::INFINITY, f64::min);
    assert!(spread < 0.1, "spread {spread}");
    assert!(dir.path().join("estimate.svg").exists());
    assert_eq!(read_csv(&dir.path().join("coefficients.csv")).len(), 128);
}

#[test]
fn denoise_rejects_bad_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let signal = dir.path().join("s.csv");
    write(&signal, "1\n2\n3\n");
    let out = cli(&["denoise", "--signal", path(&signal), "--sigma", "0.1", "--out", path(dir.path())]);
    assert_eq!(out.status.code(), Some(2));
    write(&signal, "1\n2\n3\n4\n");
    let out = cli(&["denoise", "--signal", path(&signal), "--sigma", "0.1", "--wavelet", "db4", "--out", path(dir.path())]);
    assert_eq!(out.status.code(), Some(2));
    let out = cli(&["denoise", "--signal", path(&signal), "--out", path(dir.path())]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn single_cell_study_is_quick() {
    let dir = tempfile::tempdir().unwrap();
    let start = Instant::now();
    let out = cli(&["study", "--cells", "bumps:10", "--replicates", "2", "--out", path(dir.path())]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(start.elapsed().as_secs() < 600);
    let rows = read_csv(&dir.path().join("study.csv"));
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[1][0], "bumps");
    assert_eq!(rows[1][7], "2");
    let table = std::fs::read_to_string(dir.path().join("study.txt")).unwrap();
    assert!(table.contains("bumps"));
}

#[test]
fn selftest_passes() {
    let out = cli(&["selftest", "--draws", "1000", "--workers", "1"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 5);
}

#[test]
fn shipped_configs_load() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut seen = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let p = entry.unwrap().path();
        domcftp_cli::config::RunConfig::load(Some(&p), &[]).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
        seen += 1;
    }
    assert!(seen >= 3);
}

#[test]
fn redwood_config_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/redwood_per_m2.toml");
    let out = cli(&["simulate", "--config", path(&cfg), "--replicates", "2", "--out", path(dir.path())]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let echo = std::fs::read_to_string(dir.path().join("config.resolved.toml")).unwrap();
    assert!(echo.contains("log_dominating_rate"));
}
