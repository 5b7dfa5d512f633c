use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const DEFAULT: &str = include_str!("../configs/default.json");

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cqpointer"))
        .args(args)
        .current_dir(dir)
        .env("RUST_LOG", "warn")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn config_with(dir: &Path, name: &str, edit: impl FnOnce(&mut Value)) -> String {
    let mut v: Value = serde_json::from_str(DEFAULT).unwrap();
    edit(&mut v);
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(&v).unwrap()).unwrap();
    path.to_string_lossy().into_owned()
}

fn read_json(path: impl AsRef<Path>) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn simulate_default_reports_posterior_centre() {
    let tmp = TempDir::new().unwrap();
    let o = run(tmp.path(), &["simulate", "--out", "a"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let m = read_json(tmp.path().join("a/manifest.json"));
    let lambda = m["config"]["params"]["lambda"].as_f64().unwrap();
    let measure = m["events"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["event"] == "measure")
        .unwrap();
    let (x_m, t_m) = (measure["x_m"].as_f64().unwrap(), measure["t_m"].as_f64().unwrap());
    assert_eq!(measure["q_m"].as_f64().unwrap(), x_m / (lambda * t_m));
    for f in m["files"].as_array().unwrap() {
        assert!(tmp.path().join("a").join(f.as_str().unwrap()).exists());
    }
}

#[test]
fn simulate_is_deterministic_and_self_contained() {
    let tmp = TempDir::new().unwrap();
    let cfg = config_with(tmp.path(), "small.json", |v| {
        v["grid"] = serde_json::json!({"nx": 101, "nq": 101});
    });
    assert_eq!(code(&run(tmp.path(), &["simulate", "--config", &cfg, "--seed", "3", "--out", "a"])), 0);
    assert_eq!(code(&run(tmp.path(), &["simulate", "--config", &cfg, "--seed", "3", "--out", "b"])), 0);
    let a = std::fs::read(tmp.path().join("a/manifest.json")).unwrap();
    let b = std::fs::read(tmp.path().join("b/manifest.json")).unwrap();
    assert_eq!(a, b);

    // The embedded config reproduces the manifest on its own.
    let m: Value = serde_json::from_slice(&a).unwrap();
    let embedded = tmp.path().join("embedded.json");
    std::fs::write(&embedded, serde_json::to_string(&m["config"]).unwrap()).unwrap();
    let o = run(tmp.path(), &["simulate", "--config", embedded.to_str().unwrap(), "--out", "c"]);
    assert_eq!(code(&o), 0);
    assert_eq!(std::fs::read(tmp.path().join("c/manifest.json")).unwrap(), a);

    assert_eq!(code(&run(tmp.path(), &["simulate", "--config", &cfg, "--seed", "4", "--out", "d"])), 0);
    assert_ne!(std::fs::read(tmp.path().join("d/manifest.json")).unwrap(), a);
}

#[test]
fn invalid_duration_is_an_input_error() {
    let tmp = TempDir::new().unwrap();
    let cfg = config_with(tmp.path(), "bad.json", |v| v["params"]["epsilon"] = 0.0.into());
    let o = run(tmp.path(), &["simulate", "--config", &cfg]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("NonPositiveDuration"));
    let o = run(tmp.path(), &["simulate", "--config", "missing.json"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn oversized_step_is_a_numerical_failure() {
    let tmp = TempDir::new().unwrap();
    let cfg = config_with(tmp.path(), "cfl.json", |v| {
        v["scheme"] = serde_json::json!({"dt": 0.001, "scheme": "full-hybrid", "flux": "central"});
    });
    let o = run(tmp.path(), &["compare", "--config", &cfg, "--out", "f"]);
    assert_eq!(code(&o), 2);
    let dump = read_json(tmp.path().join("f/failure.json"));
    assert!(dump["error"].as_str().unwrap().contains("CFL"));
}

#[test]
fn compare_defaults_pass() {
    let tmp = TempDir::new().unwrap();
    let o = run(tmp.path(), &["compare", "--out", "c", "--svg"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let r = read_json(tmp.path().join("c/compare.json"));
    assert!(r["l1"].as_f64().unwrap() < 5e-3);
    assert!(tmp.path().join("c/compare.csv").exists());
    assert!(tmp.path().join("c/residuals.csv").exists());
    assert!(tmp.path().join("c/compare.svg").exists());
}

#[test]
fn compare_weak_coupling_fails_gate() {
    let tmp = TempDir::new().unwrap();
    let cfg = config_with(tmp.path(), "weak.json", |v| v["params"]["lambda"] = 0.01.into());
    let o = run(tmp.path(), &["compare", "--config", &cfg, "--out", "w"]);
    assert_eq!(code(&o), 3);
    let r = read_json(tmp.path().join("w/compare.json"));
    assert!(r["l1"].as_f64().unwrap() > 0.25 * r["signal"].as_f64().unwrap());
}

#[test]
fn compare_classical_limit_is_exact() {
    let tmp = TempDir::new().unwrap();
    let cfg = config_with(tmp.path(), "classical.json", |v| {
        v["params"]["hbar"] = 0.0.into();
        v["grid"] = serde_json::json!({"nx": 201, "nq": 201});
    });
    let o = run(tmp.path(), &["compare", "--config", &cfg, "--out", "h"]);
    assert_eq!(code(&o), 0);
    let r = read_json(tmp.path().join("h/compare.json"));
    assert!(r["l1"].as_f64().unwrap() < 1e-12);
}

#[test]
fn threshold_flag_tightens_gate() {
    let tmp = TempDir::new().unwrap();
    let cfg = config_with(tmp.path(), "small.json", |v| {
        v["grid"] = serde_json::json!({"nx": 201, "nq": 201});
    });
    let o = run(tmp.path(), &["compare", "--config", &cfg, "--threshold", "1e-9", "--out", "t"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn mixture_equivalence_and_negative_control() {
    let tmp = TempDir::new().unwrap();
    assert_eq!(code(&run(tmp.path(), &["mixture-equiv", "--out", "e"])), 0);
    let spec = serde_json::json!({
        "representation": "principal",
        "label": {"kind": "gaussian", "components": [{"weight": 1.0, "mean": 0.3, "sigma": 0.4}]},
        "profile": {"kind": "gaussian", "components": [{"weight": 1.0, "mean": -0.2, "sigma": 0.5}]},
        "mass": 1.0
    });
    let mut unswapped = spec.clone();
    unswapped["representation"] = "separated".into();
    let cfg = config_with(tmp.path(), "pairs.json", |v| {
        v["mixtures"] = serde_json::json!([{"principal": spec, "separated": unswapped}]);
    });
    let o = run(tmp.path(), &["mixture-equiv", "--config", &cfg, "--out", "u"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stdout).contains("max pointwise difference"));
}

#[test]
fn sampling_gate_and_reproducibility() {
    let tmp = TempDir::new().unwrap();
    let o = run(tmp.path(), &["sample", "--out", "a", "--svg"]);
    assert_eq!(code(&o), 0);
    let r = read_json(tmp.path().join("a/ks.json"));
    assert!(r["ks"].as_f64().unwrap() < 0.02);
    assert!(tmp.path().join("a/split_densities.svg").exists());
    assert_eq!(code(&run(tmp.path(), &["sample", "--out", "b"])), 0);
    assert_eq!(
        std::fs::read(tmp.path().join("a/samples.csv")).unwrap(),
        std::fs::read(tmp.path().join("b/samples.csv")).unwrap()
    );

    let o = run(tmp.path(), &["sample", "--n", "100", "--out", "c"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("too small"));
    assert_eq!(read_json(tmp.path().join("c/ks.json"))["gated"], false);

    assert_eq!(code(&run(tmp.path(), &["sample", "--n", "99", "--out", "d"])), 1);
}
