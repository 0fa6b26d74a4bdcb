use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn redistwalk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_redistwalk")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn spec_file(dir: &Path, name: &str, json: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, json).unwrap();
    path.to_str().unwrap().to_string()
}

fn csv_rows(path: &Path) -> usize {
    fs::read_to_string(path).unwrap().lines().count() - 1
}

#[test]
fn tv_writes_three_curves_and_passes() {
    let dir = tempfile::tempdir().unwrap();
    let spec = spec_file(dir.path(), "s.json", r#"{"N":16,"nu0":[[5,1]],"nuN":[[11,1]]}"#);
    let out = dir.path().join("out");
    let o = redistwalk(&["tv", "--spec", &spec, "--horizon", "400", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("prop1: PASS"));
    for name in ["pair.csv", "sup.csv", "tilde.csv"] {
        assert_eq!(csv_rows(&out.join(name)), 401, "{name}");
    }
}

#[test]
fn tv_at_horizon_zero_is_vacuous() {
    let dir = tempfile::tempdir().unwrap();
    let spec = spec_file(dir.path(), "s.json", r#"{"N":16,"nu0":[[5,1]],"nuN":[[11,1]]}"#);
    let out = dir.path().join("out");
    let o = redistwalk(&["tv", "--spec", &spec, "--horizon", "0", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("prop1: PASS (vacuous"));
    assert_eq!(csv_rows(&out.join("sup.csv")), 1);
}

#[test]
fn even_redistribution_site_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let spec = spec_file(dir.path(), "s.json", r#"{"N":16,"nu0":[[4,1]],"nuN":[[11,1]]}"#);
    let o = redistwalk(&["tv", "--spec", &spec, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("odd sites"), "{}", stderr(&o));
}

#[test]
fn spectral_reports_the_slowest_mode() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let spec = spec_file(dir.path(), "s.json", r#"{"N":16,"nu0":[[3,1]],"nuN":[[13,1]]}"#);
    let o = redistwalk(&["spectral", "--spec", &spec, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("= 13\n"), "{text}");
    assert!(text.contains("pi/14"), "{text}");
    assert_eq!(csv_rows(&out.join("candidates.csv")), 3);
    assert_eq!(csv_rows(&out.join("spectrum.csv")), 17);

    let spec = spec_file(dir.path(), "eq.json", r#"{"N":24,"nu0":[[7,1]],"nuN":[[7,1]]}"#);
    let o = redistwalk(&["spectral", "--spec", &spec, "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("/2 = 12\n"), "{}", stdout(&o));
}

#[test]
fn spectral_needs_point_masses() {
    let dir = tempfile::tempdir().unwrap();
    let spec = spec_file(dir.path(), "s.json", r#"{"N":16,"nu0":[[5,0.5],[7,0.5]],"nuN":[[5,0.5],[7,0.5]]}"#);
    let o = redistwalk(&["spectral", "--spec", &spec, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("point-mass"));
}

#[test]
fn couple_refuses_unequal_random_laws() {
    let dir = tempfile::tempdir().unwrap();
    let spec = spec_file(dir.path(), "s.json", r#"{"N":16,"nu0":[[5,0.5],[7,0.5]],"nuN":[[5,1]]}"#);
    let o = redistwalk(&["couple", "--spec", &spec, "--seed", "1", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("open problem"), "{}", stderr(&o));
}

#[test]
fn couple_needs_a_seed() {
    let dir = tempfile::tempdir().unwrap();
    let spec = spec_file(dir.path(), "s.json", r#"{"N":16,"nu0":[[5,1]],"nuN":[[11,1]]}"#);
    let o = redistwalk(&["couple", "--spec", &spec, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--seed"));
}

#[test]
fn couple_with_equal_point_masses_runs_both_machines() {
    let dir = tempfile::tempdir().unwrap();
    let spec = spec_file(dir.path(), "s.json", r#"{"N":16,"nu0":[[5,1]],"nuN":[[5,1]]}"#);
    let out = dir.path().join("out");
    let o = redistwalk(&["couple", "--spec", &spec, "--seed", "11", "--trials", "20000", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}{}", stdout(&o), stderr(&o));
    let report: Value = serde_json::from_str(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["pass"], Value::Bool(true));
    let rates = report["rates"].as_array().unwrap();
    assert_eq!(rates.len(), 2);
    for r in rates {
        let rel = r["relative_error"].as_f64().unwrap();
        assert!(rel.abs() < 0.1, "{r}");
    }
    for kind in ["deterministic", "symmetric"] {
        assert_eq!(csv_rows(&out.join(format!("trials_{kind}.csv"))), 20000);
        assert!(out.join(format!("survival_{kind}.csv")).exists());
        assert!(out.join(format!("bound_{kind}.csv")).exists());
    }
}

#[test]
fn couple_output_does_not_depend_on_threads() {
    let dir = tempfile::tempdir().unwrap();
    let spec = spec_file(dir.path(), "s.json", r#"{"N":16,"nu0":[[5,1]],"nuN":[[11,1]]}"#);
    let run = |threads: &str| {
        let out = dir.path().join(format!("t{threads}"));
        let o = redistwalk(&[
            "couple", "--spec", &spec, "--seed", "5", "--trials", "5000", "--x", "6", "--y", "9", "--threads", threads,
            "--out", out.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        assert!(stdout(&o).contains("parity-fix"));
        out
    };
    let (a, b) = (run("1"), run("3"));
    for name in ["trials_deterministic.csv", "survival_deterministic.csv", "bound_deterministic.csv", "report.json"] {
        assert_eq!(fs::read(a.join(name)).unwrap(), fs::read(b.join(name)).unwrap(), "{name}");
    }
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    spec_file(dir.path(), "s.json", r#"{"N":16,"nu0":[[5,1]],"nuN":[[11,1]]}"#);
    let config = spec_file(dir.path(), "run.json", r#"{"spec": "s.json", "horizon": 50, "out": "from-config"}"#);
    let o = redistwalk(&["tv", "--config", &config, "--horizon", "20"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(csv_rows(&dir.path().join("from-config").join("sup.csv")), 21);
}

#[test]
fn verify_prints_json() {
    let o = redistwalk(&["verify", "--only", "1,4"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["pass"], Value::Bool(true));
    assert_eq!(report["criteria"].as_array().unwrap().len(), 2);
}

#[test]
fn verify_catches_a_perturbed_lambda() {
    let o = redistwalk(&["verify", "--only", "1,5", "--mutate-lambda", "1e-9"]);
    assert_eq!(o.status.code(), Some(1));
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let pass: Vec<bool> = report["criteria"].as_array().unwrap().iter().map(|c| c["pass"].as_bool().unwrap()).collect();
    assert_eq!(pass, [false, true]);
}

#[test]
fn verify_rejects_unknown_criteria() {
    let o = redistwalk(&["verify", "--only", "12"]);
    assert_eq!(o.status.code(), Some(2));
}
