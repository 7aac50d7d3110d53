use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinchaos")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_owned()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines().skip(1).map(|l| l.split(',').map(str::to_owned).collect()).collect()
}

#[test]
fn default_config_writes_the_zeroth_kappa_row() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c");
    let o = run(&["coeffs", "--seed", "1", "--out", path(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(out.join("kappa.csv")).unwrap();
    assert_eq!(text.lines().next(), Some("alpha,beta,r2,t,kappa"));
    let rows = csv_rows(&text);
    let row = rows.iter().find(|r| r[0] == "0" && r[1] == "0").expect("(0,0) row");
    let (r2, t): (f64, f64) = (row[2].parse().unwrap(), row[3].parse().unwrap());
    let want = spinchaos::chaoscoef::kappa(0, 0, r2, t).unwrap();
    assert_eq!(row[4].parse::<f64>().unwrap(), want);
    for f in ["icoeff.csv", "theta.csv", "nu.csv", "coeffs.json"] {
        assert!(out.join(f).exists(), "{f}");
    }
}

#[test]
fn unit_ratio_rows_reduce_to_hermite_sums() {
    // c² weighted (l(l+1) - 1) / 4 sums to 1 for these bands, so ξ = |s|.
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "unit.json",
        &format!(
            r#"{{"profile": {{"spin": 1, "bands": [{{"l": 1, "c": {}}}, {{"l": 2, "c": {}}}]}}, "level": 0.7, "max_order": 8, "seed": 5}}"#,
            1.5f64.sqrt(),
            0.5f64.sqrt()
        ),
    );
    let out = dir.path().join("u");
    let o = run(&["coeffs", "--config", &cfg, "--out", path(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let rows = csv_rows(&fs::read_to_string(out.join("kappa.csv")).unwrap());
    for row in rows {
        let (a, b): (u32, u32) = (row[0].parse().unwrap(), row[1].parse().unwrap());
        let r2: f64 = row[2].parse().unwrap();
        assert!((r2 - 1.0).abs() < 1e-12, "r2 = {r2}");
        let sum: f64 = (0..=a)
            .map(|i| spinchaos::chaoscoef::nu(i, b, a).unwrap() * spinchaos::chaoscoef::hermite_ratio(a - i, 0.7))
            .sum();
        let got: f64 = row[4].parse().unwrap();
        assert!((got - sum).abs() <= 1e-12 * sum.abs().max(1e-300), "({a},{b}): {got} vs {sum}");
    }
}

#[test]
fn malformed_config_exits_2_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_config(dir.path(), "bad.json", "{ \"profile\": ");
    let unknown = write_config(
        dir.path(),
        "unknown.json",
        r#"{"profile": {"spin": 0, "bands": [{"l": 3, "c": 1.0}], "normalize": true}, "seed": 1, "grdi": 3}"#,
    );
    let unnormalized =
        write_config(dir.path(), "unnorm.json", r#"{"profile": {"spin": 0, "bands": [{"l": 3, "c": 2.0}]}, "seed": 1}"#);
    for cfg in [&bad, &unknown, &unnormalized] {
        for cmd in ["coeffs", "expectation", "chaos", "validate", "simulate"] {
            let out = dir.path().join(format!("o_{cmd}"));
            let o = run(&[cmd, "--config", cfg, "--out", path(&out)]);
            assert_eq!(code(&o), 2, "{cmd} {cfg}");
            assert!(!out.exists(), "{cmd} wrote output");
        }
    }
    let out = dir.path().join("noseed");
    assert_eq!(code(&run(&["coeffs", "--out", path(&out)])), 2);
    assert!(!out.exists());
}

#[test]
fn output_is_identical_across_worker_counts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("e");
    let mut reports = Vec::new();
    for workers in ["1", "3"] {
        let o = run(&["expectation", "--seed", "11", "--n", "32", "--grid", "16", "--workers", workers, "--out", path(&out)]);
        assert_ne!(code(&o), 2, "{}", String::from_utf8_lossy(&o.stderr));
        reports.push(fs::read(out.join("expectation.json")).unwrap());
    }
    assert_eq!(reports[0], reports[1]);

    let mut chaos = Vec::new();
    for workers in ["2", "1"] {
        let o = run(&["chaos", "--seed", "4", "--n", "30", "--grid", "16", "--order", "4", "--workers", workers, "--out", path(&out)]);
        assert_ne!(code(&o), 2, "{}", String::from_utf8_lossy(&o.stderr));
        chaos.push(["chaos.json", "truncation.csv", "covariance.csv"].map(|f| fs::read(out.join(f)).unwrap()));
    }
    assert_eq!(chaos[0], chaos[1]);
}

#[test]
fn embedded_config_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r");
    assert_eq!(code(&run(&["coeffs", "--seed", "8", "--order", "4", "--out", path(&out)])), 0);
    let first: Value = serde_json::from_slice(&fs::read(out.join("coeffs.json")).unwrap()).unwrap();
    let cfg = write_config(dir.path(), "again.json", &serde_json::to_string(&first["config"]).unwrap());
    assert_eq!(code(&run(&["coeffs", "--config", &cfg])), 0);
    let second: Value = serde_json::from_slice(&fs::read(out.join("coeffs.json")).unwrap()).unwrap();
    assert_eq!(first["config"], second["config"]);
    assert_eq!(first["config_sha256"], second["config_sha256"]);
    assert_eq!(first["config"]["max_order"], 4);
}

#[test]
fn spin_zero_target_is_pi_per_unit_density() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "s0.json",
        r#"{"profile": {"spin": 0, "bands": [{"l": 4, "c": 1.0}], "normalize": true}, "seed": 2, "n_realizations": 30, "grid": 24}"#,
    );
    let out = dir.path().join("s0");
    let o = run(&["expectation", "--config", &cfg, "--out", path(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let rep: Value = serde_json::from_slice(&fs::read(out.join("expectation.json")).unwrap()).unwrap();
    let density = rep["result"]["target_density"].as_f64().unwrap();
    assert!((density - std::f64::consts::PI).abs() < 1e-14, "{density}");
    assert!((rep["result"]["bracket"].as_f64().unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-14);
}

#[test]
fn unit_ratio_target_bracket_is_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "band.json",
        r#"{"profile": {"spin": 2, "bands": [{"l": 3, "c": 1.0}], "normalize": true}, "seed": 2, "n_realizations": 30, "grid": 16}"#,
    );
    let out = dir.path().join("b");
    let o = run(&["expectation", "--config", &cfg, "--out", path(&out)]);
    assert_ne!(code(&o), 2, "{}", String::from_utf8_lossy(&o.stderr));
    let rep: Value = serde_json::from_slice(&fs::read(out.join("expectation.json")).unwrap()).unwrap();
    assert_eq!(rep["result"]["bracket"].as_f64().unwrap(), 2.0);
}

#[test]
fn validate_passes_and_catches_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("v");
    let o = run(&["validate", "--seed", "1", "--n", "30", "--out", path(&out)]);
    let stdout = String::from_utf8_lossy(&o.stdout).into_owned();
    assert_eq!(code(&o), 0, "{stdout}");
    assert!(stdout.lines().all(|l| l.starts_with("PASS ")), "{stdout}");
    assert!(stdout.contains("identity/q0_reduction"));

    let o = run(&["validate", "--seed", "1", "--n", "30", "--out", path(&out), "--tamper-kappa", "0,0,1.001"]);
    let stdout = String::from_utf8_lossy(&o.stdout).into_owned();
    assert_eq!(code(&o), 1);
    assert!(stdout.lines().any(|l| l.starts_with("FAIL identity/q0_reduction")), "{stdout}");

    assert_eq!(code(&run(&["validate", "--seed", "1", "--n", "5", "--out", path(&dir.path().join("few"))])), 2);
}

#[test]
fn simulate_exports_a_mesh() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s");
    assert_eq!(code(&run(&["simulate", "--seed", "6", "--grid", "16", "--out", path(&out)])), 0);
    let off = fs::read_to_string(out.join("level_surface.off")).unwrap();
    assert!(off.starts_with("OFF"));
    let rep: Value = serde_json::from_slice(&fs::read(out.join("field.json")).unwrap()).unwrap();
    assert!(rep["result"]["triangles"].as_u64().unwrap() > 0);
    assert!(rep["result"]["realization"].is_object());
}
