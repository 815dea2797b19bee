//! End-to-end runs of the `qdsym` binary.

use std::path::Path;
use std::process::{Command, Output};

fn qdsym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qdsym"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("run.cfg");
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

/// Data rows of a CSV with `#` header lines, split into fields.
fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn unknown_config_keys_exit_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "mu = 0.5\nwidth = 3\ncolour = red\n");
    let out = qdsym(&["evolve", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("colour") && err.contains("width"), "{err}");
}

#[test]
fn invalid_mu_and_budget_exit_with_code_two() {
    assert_eq!(qdsym(&["invariants", "--mu", "0"]).status.code(), Some(2));
    assert_eq!(
        qdsym(&["invariants", "--qubits", "12"]).status.code(),
        Some(2)
    );
    assert_eq!(qdsym(&["check", "--mu", ""]).status.code(), Some(2));
}

#[test]
fn header_echoes_resolved_configuration() {
    let out = qdsym(&["invariants", "--mu", "0.25", "--qubits", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let csv = String::from_utf8(out.stdout).unwrap();
    let header: Vec<&str> = csv.lines().take_while(|l| l.starts_with('#')).collect();
    assert_eq!(header[0], "# qdsym invariants");
    assert!(header.contains(&"# mu=0.25"));
    assert!(header.contains(&"# qubits=2"));
    assert!(header.contains(&"# seed=1"));
    let status = String::from_utf8(out.stderr).unwrap();
    assert!(status.contains("dimension=1"), "{status}");
}

#[test]
fn out_flag_writes_file_and_status_to_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("inv.csv");
    let out = qdsym(&["invariants", "--mu", "0.5", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(&path).unwrap();
    assert_eq!(rows(&csv).len(), 4);
    assert!(String::from_utf8_lossy(&out.stdout).contains("agree"));
}

#[test]
fn kraus_product_code_fails() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "mu=0.5\ncode=product\n");
    let out = qdsym(&["kraus", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(1));
    let csv = String::from_utf8(out.stdout).unwrap();
    assert_ne!(rows(&csv)[0][4], "error-avoiding");
}

#[test]
fn kraus_invariant_code_succeeds() {
    let out = qdsym(&[
        "kraus", "--mu", "-0.3,0.7", "--qubits", "4", "--time", "2.5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let csv = String::from_utf8(out.stdout).unwrap();
    assert!(rows(&csv).iter().all(|r| r[4] == "error-avoiding"));
}

#[test]
fn evolve_rows_have_expected_shape() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "mu=0.5\ntimes.start=0\ntimes.stop=10\ntimes.steps=20\n",
    );
    let out = qdsym(&["evolve", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(0));
    let data = rows(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(data.len(), 40);
    let num = |r: &Vec<String>, k: usize| r[k].parse::<f64>().unwrap();

    let t0: Vec<_> = data.iter().filter(|r| num(r, 2) == 0.0).collect();
    assert_eq!(t0.len(), 2);
    for r in t0 {
        assert_eq!(num(r, 3), 1.0);
        assert!(num(r, 7) <= 1e-12);
    }
    for r in data.iter().filter(|r| r[1] == "invariant") {
        assert!(1.0 - num(r, 3) <= 1e-9);
        assert_eq!(r[8], "error-avoiding");
    }
    let dip = data
        .iter()
        .filter(|r| r[1] == "product")
        .map(|r| num(r, 3))
        .fold(1.0, f64::min);
    assert!(dip < 1.0 - 1e-3, "control fidelity stayed at {dip}");
}

#[test]
fn single_step_grid_gives_one_row_per_state() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "mu=0.5\ntimes.start=0\ntimes.stop=10\ntimes.steps=1\n",
    );
    let out = qdsym(&["evolve", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(0));
    let data = rows(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(data.len(), 2);
    assert!(data.iter().all(|r| r[3].parse::<f64>().unwrap() == 1.0));
}

#[test]
fn check_passes_on_default_grid() {
    let out = qdsym(&["check"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text
        .lines()
        .next()
        .unwrap()
        .starts_with("module,property,status"));
    assert!(!text.contains("FAIL"));
}
