use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_degfrac");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("spawn degfrac")
}

fn write_config(dir: &Path, body: &str) -> String {
    let p = dir.join("run.toml");
    fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

fn out_arg(dir: &Path, sub: &str) -> String {
    dir.join(sub).to_string_lossy().into_owned()
}

#[test]
fn classical_eigenvalue_table() {
    let d = tempfile::tempdir().unwrap();
    let cfg = write_config(d.path(), "k = 1\nm = 0.0\nalpha = 1.5\nphi = \"zero\"\npsi = \"zero\"\n");
    let out = out_arg(d.path(), "eig");
    let o = run(&["eigen", "--config", &cfg, "--out", &out, "--modes", "5"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let table = fs::read_to_string(d.path().join("eig/eigenvalues.csv")).unwrap();
    let mut lines = table.lines();
    assert_eq!(lines.next(), Some("n,lambda_n"));
    for (n, line) in lines.enumerate() {
        let lambda: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        let exact = ((n + 1) as f64 * std::f64::consts::PI).powi(2);
        assert!((lambda / exact - 1.0).abs() < 1e-8, "n={} {}", n + 1, lambda);
    }
}

#[test]
fn zero_data_gives_zero_field() {
    let d = tempfile::tempdir().unwrap();
    let cfg = write_config(d.path(), "k = 2\nm = 1.5\nalpha = 1.7\nphi = \"zero\"\npsi = \"zero\"\n");
    let out = out_arg(d.path(), "z");
    let o = run(&["solve", "--config", &cfg, "--out", &out, "--grid", "5,7"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let field = fs::read_to_string(d.path().join("z/field.csv")).unwrap();
    assert_eq!(field.lines().count(), 1 + 35);
    for line in field.lines().skip(1) {
        let u: f64 = line.split(',').nth(2).unwrap().parse().unwrap();
        assert_eq!(u, 0.0);
    }
    let report: Value = serde_json::from_str(&fs::read_to_string(d.path().join("z/report.json")).unwrap()).unwrap();
    assert!(report.as_object().unwrap().values().all(|c| c["pass"] == Value::Bool(true)));
}

#[test]
fn solve_then_verify() {
    let d = tempfile::tempdir().unwrap();
    let cfg = write_config(
        d.path(),
        "k = 1\nm = 0.5\nalpha = 1.5\nphi = { q = 4, coeffs = [1.0, 0.5] }\npsi = { q = 4 }\n",
    );
    let out = out_arg(d.path(), "s");
    let o = run(&["solve", "--config", &cfg, "--out", &out]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.lines().all(|l| l.starts_with("PASS ")), "{stdout}");
    for f in ["eigenvalues.csv", "coefficients.csv", "field.csv", "report.json", "config.toml"] {
        assert!(d.path().join("s").join(f).exists(), "{f}");
    }
    let first = fs::read(d.path().join("s/field.csv")).unwrap();
    let again = out_arg(d.path(), "t");
    assert!(run(&["solve", "--config", &cfg, "--out", &again]).status.success());
    assert_eq!(first, fs::read(d.path().join("t/field.csv")).unwrap());

    let v = run(&["verify", "--out", &out]);
    assert!(v.status.success(), "{}", String::from_utf8_lossy(&v.stderr));

    fs::write(d.path().join("s/field.csv"), "x,y,u\n").unwrap();
    let v = run(&["verify", "--out", &out]);
    assert_eq!(v.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&v.stderr).contains("field.csv"));
}

#[test]
fn json_format() {
    let d = tempfile::tempdir().unwrap();
    let cfg = write_config(d.path(), "k = 1\nm = 0.25\nalpha = 1.2\nphi = { q = 4 }\npsi = \"zero\"\n");
    let out = out_arg(d.path(), "j");
    let o = run(&["solve", "--config", &cfg, "--out", &out, "--format", "json", "--grid", "3,3"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&fs::read_to_string(d.path().join("j/field.json")).unwrap()).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 9);
    assert!(v[0]["u"].is_f64());
}

#[test]
fn expand_writes_table() {
    let d = tempfile::tempdir().unwrap();
    let cfg = write_config(d.path(), "k = 1\nm = 0.5\nalpha = 1.5\nphi = { q = 4 }\npsi = { q = 6 }\n");
    let out = out_arg(d.path(), "e");
    let o = run(&["expand", "--config", &cfg, "--out", &out, "--modes", "8"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let table = fs::read_to_string(d.path().join("e/expansion.csv")).unwrap();
    assert_eq!(table.lines().count(), 9);
}

#[test]
fn bad_configs_are_rejected() {
    let d = tempfile::tempdir().unwrap();
    let cfg = write_config(d.path(), "k = 1\nm = 1.0\nalpha = 1.5\nphi = \"zero\"\npsi = \"zero\"\n");
    let o = run(&["solve", "--config", &cfg, "--out", &out_arg(d.path(), "x")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("`m`"));

    let cfg = write_config(d.path(), "k = 2\nm = 0.5\nalpha = 1.5\nphi = { q = 5 }\npsi = \"zero\"\n");
    let o = run(&["solve", "--config", &cfg, "--out", &out_arg(d.path(), "x")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("phi.q"));

    let o = run(&["solve", "--config", &d.path().join("missing.toml").to_string_lossy()]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["solve", "--config", &cfg, "--grid", "3"]);
    assert_eq!(o.status.code(), Some(2));
}
