use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use smoothwig_cli::config::ExperimentConfig;

const SMALL: &str = r#"
eps = 0.5
t_final = 0.2
dt = 0.01
output = "unused"

[potential]
kind = "free"
coefficients = []

[smoothing]
sigma_x = 0.5
sigma_k = 0.5
spectrogram_sigma_x = 1.0

[initial_condition]
kind = "gaussian_sum"
amplitude = 1.0

[grid]
field_step = 0.0625
field_points = 256
x_range = [-4.0, 4.0]
k_range = [-8.0, 8.0]
resolution = 64
"#;

/// Two real packets at `x = -1.5` and `x = 1.5`; their Wigner cross term
/// oscillates in `k` around `x = 0`.
fn two_packets() -> String {
    SMALL
        .replace(
            "amplitude = 1.0",
            "amplitude = 1.0\npackets = [\n  { k = [4.0, 0.0], lambda = [-12.0, 0.0], m = [9.0, 0.0] },\n  { k = [4.0, 0.0], lambda = [12.0, 0.0], m = [9.0, 0.0] },\n]",
        )
        .replace("k_range = [-8.0, 8.0]", "k_range = [-2.0, 2.0]")
        .replace("resolution = 64", "resolution = 64\nk_resolution = 128")
}

fn smoothwig(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_smoothwig")).args(args).output().expect("binary runs")
}

fn config_file(dir: &Path, text: &str) -> PathBuf {
    let p = dir.join("cfg.toml");
    std::fs::write(&p, text).unwrap();
    p
}

fn run_ok(args: &[&str]) -> Output {
    let o = smoothwig(args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    o
}

fn summary(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("summary.json")).unwrap()).unwrap()
}

#[test]
fn transform_writes_fields_and_summary() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = config_file(tmp.path(), &two_packets());
    let out = tmp.path().join("t");
    run_ok(&["transform", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    for f in ["wigner.psf2", "swt.psf2", "spectrogram.psf2", "marginal_x.csv", "marginal_k.csv", "config.toml"] {
        assert!(out.join(f).exists(), "{f}");
    }
    let s = summary(&out);
    // all three transforms carry the same mass
    let total = s["wigner"]["total"].as_f64().unwrap();
    for k in ["swt", "spectrogram"] {
        assert!((s[k]["total"].as_f64().unwrap() - total).abs() < 1e-6 * total, "{k}");
    }
    assert!(s["spectrogram"]["min"].as_f64().unwrap() > -1e-9 * s["spectrogram"]["max"].as_f64().unwrap());
}

#[test]
fn smoothing_suppresses_cross_terms() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = config_file(tmp.path(), &two_packets());
    let out = tmp.path().join("t");
    run_ok(&["transform", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    let s = summary(&out);
    let neg = |k: &str| -s[k]["min"].as_f64().unwrap() / s[k]["max"].as_f64().unwrap();
    // the cross term dips to ~0.8 of the peak; smoothing leaves ~1%
    assert!(neg("wigner") > 0.5);
    assert!(neg("wigner") > 5.0 * neg("swt"), "wigner {} swt {}", neg("wigner"), neg("swt"));
}

#[test]
fn zero_amplitude_gives_zero_fields() {
    let tmp = tempfile::tempdir().unwrap();
    let text = SMALL.replace("amplitude = 1.0", "amplitude = 0.0");
    let cfg = config_file(tmp.path(), &text);
    let out = tmp.path().join("t");
    run_ok(&["transform", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    let s = summary(&out);
    for k in ["wigner", "swt", "spectrogram"] {
        for q in ["min", "max", "total"] {
            assert_eq!(s[k][q].as_f64().unwrap(), 0.0, "{k} {q}");
        }
    }
    // nothing to transport: the case study refuses instead of dividing by zero
    let o = smoothwig(&["casestudy", "free", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("zero"));
}

#[test]
fn flags_override_config_and_are_echoed() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = config_file(tmp.path(), SMALL);
    let out = tmp.path().join("t");
    run_ok(&[
        "transform",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--eps",
        "0.25",
        "--resolution",
        "32",
        "--sigma-x",
        "0.75",
        "--sigma-k",
        "0.25",
    ]);
    let echoed = ExperimentConfig::load(&out.join("config.toml")).unwrap();
    let mut want = ExperimentConfig::from_toml(SMALL).unwrap();
    want.eps = 0.25;
    want.grid.resolution = 32;
    want.smoothing.sigma_x = 0.75;
    want.smoothing.sigma_k = 0.25;
    want.output = out.clone();
    assert_eq!(echoed, want);
}

#[test]
fn casestudy_is_deterministic() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = config_file(tmp.path(), SMALL);
    let dirs = [tmp.path().join("a"), tmp.path().join("b")];
    for d in &dirs {
        run_ok(&["casestudy", "free", "--config", cfg.to_str().unwrap(), "--out", d.to_str().unwrap()]);
    }
    let mut names: Vec<_> = std::fs::read_dir(&dirs[0])
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .filter(|n| n != "config.toml")
        .collect();
    names.sort();
    assert!(names.iter().any(|n| n == "report.json"));
    assert!(names.iter().any(|n| n == "marginals_004.csv"));
    for n in &names {
        let a = std::fs::read(dirs[0].join(n)).unwrap();
        let b = std::fs::read(dirs[1].join(n)).unwrap();
        assert!(a == b, "{n:?} differs between runs");
    }
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dirs[0].join("report.json")).unwrap()).unwrap();
    assert_eq!(report["rows"].as_array().unwrap().len(), 5);
    assert!(report["swt_mass_drift"].as_f64().unwrap() < 1e-3);
}

#[test]
fn evolve_writes_snapshots() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = config_file(tmp.path(), SMALL);
    let out = tmp.path().join("e");
    run_ok(&["evolve", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    for i in 0..5 {
        assert!(out.join(format!("swt_{i:03}.psf2")).exists());
        assert!(out.join(format!("marginal_{i:03}.csv")).exists());
    }
    let csv = std::fs::read_to_string(out.join("conservation.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "t,mass,energy");
    assert_eq!(csv.lines().count(), 6);
}

#[test]
fn casestudy_rejects_a_mismatched_potential() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = config_file(tmp.path(), SMALL);
    let o = smoothwig(&["casestudy", "harmonic", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("potential"));
}

#[test]
fn invalid_config_exits_with_the_field_name() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = config_file(tmp.path(), &SMALL.replace("dt = 0.01", "dt = -0.01"));
    let o = smoothwig(&["transform", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("dt: "));
    let o = smoothwig(&["transform", "--eps", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("eps"));
}

#[test]
fn verify_passes_and_the_corrupt_hook_fails() {
    let tmp = tempfile::tempdir().unwrap();
    let report = tmp.path().join("verify.json");
    let o = run_ok(&["verify", "--report", report.to_str().unwrap()]);
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("0 failed"), "{text}");
    let checks: Vec<serde_json::Value> = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert!(checks.len() >= 10);
    assert!(checks.iter().all(|c| c["passed"] == true));

    let o = smoothwig(&["verify", "--corrupt-fourier"]);
    assert_eq!(o.status.code(), Some(1));
    let text = String::from_utf8_lossy(&o.stdout);
    for name in ["transform_vs_quadrature", "marginals"] {
        let line = text.lines().find(|l| l.contains(name)).unwrap();
        assert!(line.starts_with("[FAIL]"), "{line}");
    }
}
