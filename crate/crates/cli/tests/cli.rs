use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn tw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tw"))
        .args(args)
        .env_remove("TW_MAX_SEARCH")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn csv_rows(out: &Output) -> Vec<Vec<String>> {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn maximally_mixed_fermion_has_flat_wigner() {
    let out = tw(&["wigner", "--system", "fermion", "--modes", "1", "--mixed"]);
    assert_eq!(code(&out), 0);
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 4);
    for r in rows {
        assert_eq!(r[4].parse::<f64>().unwrap(), 0.5);
        assert_eq!(r[5].parse::<f64>().unwrap(), 0.0);
    }
}

#[test]
fn qutrit_basis_state_table() {
    let out = tw(&["wigner", "--system", "weyl", "--d", "3", "--normalized", "--basis", "0"]);
    assert_eq!(code(&out), 0);
    assert_eq!(csv_rows(&out).len(), 9);
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("normalization 1.000000000000"), "{stderr}");
}

#[test]
fn state_file_input_and_json_output() {
    let dir = tempfile::tempdir().unwrap();
    let state = write(dir.path(), "rho.json", "[[0.5, [0.25, 0.0]], [[0.25, 0.0], 0.5]]");
    let out = tw(&["wigner", "--state", state.to_str().unwrap(), "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["wigner"]["points"].as_array().unwrap().len(), 4);
    let out = tw(&["char", "--state", state.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(csv_rows(&out)[0], vec!["0", "0", "1", "0"]);
}

#[test]
fn invalid_inputs_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", "[[1, 0], [0");
    assert_eq!(code(&tw(&["wigner", "--state", bad.to_str().unwrap()])), 2);
    let not_state = write(dir.path(), "neg.json", "[[2, 0], [0, -1]]");
    assert_eq!(code(&tw(&["wigner", "--state", not_state.to_str().unwrap()])), 2);
    assert_eq!(code(&tw(&["wigner"])), 2);
    assert_eq!(code(&tw(&["wigner", "--system", "mixed", "--modes", "2", "--mixed"])), 2);
    assert_eq!(code(&tw(&["bogus"])), 2);
}

#[test]
fn dimension_mismatch_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let rho = write(dir.path(), "rho.json", "[[1, 0], [0, 0]]");
    assert_eq!(code(&tw(&["wigner", "--modes", "2", "--state", rho.to_str().unwrap()])), 3);
    assert_eq!(code(&tw(&["gaussian", "--modes", "2", "--block-diagonal", "0.5"])), 3);
}

#[test]
fn symmetry_orders() {
    for (args, order) in [
        (vec!["symmetry", "--system", "fermion", "--modes", "1"], 1),
        (vec!["symmetry", "--system", "fermion", "--modes", "1", "--normalized"], 3),
        (vec!["symmetry", "--system", "weyl", "--d", "3", "--modes", "1", "--normalized"], 24),
    ] {
        let out = tw(&args);
        assert_eq!(code(&out), 0);
        assert_eq!(stdout_json(&out)["order"], order);
    }
}

#[test]
fn symmetry_realizations_and_determinism() {
    let args = ["symmetry", "--modes", "1", "--normalized", "--realize"];
    let a = tw(&args);
    let b = tw(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout_json(&a)["unitaries"].as_array().unwrap().len(), 3);
}

#[test]
fn search_budget_refusal_exits_4() {
    let out = Command::new(env!("CARGO_BIN_EXE_tw"))
        .args(["symmetry", "--modes", "2"])
        .env("TW_MAX_SEARCH", "1000")
        .output()
        .unwrap();
    assert_eq!(code(&out), 4);
}

#[test]
fn clifford_detection() {
    let out = tw(&["clifford-detect", "--gate", "h"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["detected"], true);
    assert_eq!(v["class"], "generalized_only");
    let v = stdout_json(&tw(&["clifford-detect", "--gate", "x"]));
    assert_eq!(v["class"], "plain");
    assert_eq!(v["translation"], serde_json::json!([1, 0]));
    let v = stdout_json(&tw(&["clifford-detect", "--gate", "t"]));
    assert_eq!(v["detected"], false);
    assert_eq!(code(&tw(&["clifford-detect", "--modes", "2", "--gate", "h"])), 3);
}

#[test]
fn gaussian_and_positivity() {
    let out = tw(&["gaussian", "--block-diagonal", "0.5"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["wigner_nonneg"], false);
    assert!((v["purity"].as_f64().unwrap() - 0.625).abs() < 1e-12);

    let v = stdout_json(&tw(&["positivity", "check", "--mixed"]));
    assert_eq!(v["nonneg"], true);
    assert_eq!(v["agrees"], true);
    let v = stdout_json(&tw(&["positivity", "check", "--basis", "0", "--normalized"]));
    assert_eq!(v["classifier"]["classifier_used"], "one_mode_normalized");
    assert_eq!(v["agrees"], true);
    let out = tw(&["positivity", "check", "--modes", "2", "--normalized", "--block-diagonal", "1,1"]);
    let v = stdout_json(&out);
    assert_eq!(v["nonneg"], false);
    assert_eq!(v["direct"]["witness_point"], serde_json::json!([0, 0, 0, 0]));
    let v = stdout_json(&tw(&["positivity", "check", "--modes", "2", "--block-diagonal", "0.2,-0.3", "--normalized"]));
    assert_eq!(v["nonneg"], true);
}

#[test]
fn gaussian_from_covariance_file() {
    let dir = tempfile::tempdir().unwrap();
    let cov = write(dir.path(), "cov.json", "[[0, 0.3], [-0.3, 0]]");
    let out = tw(&["gaussian", "--cov", cov.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let bad = write(dir.path(), "sym.json", "[[0, 0.3], [0.3, 0]]");
    assert_eq!(code(&tw(&["gaussian", "--cov", bad.to_str().unwrap()])), 2);
    assert_eq!(code(&tw(&["gaussian", "--system", "weyl", "--block-diagonal", "0.1"])), 2);
}

#[test]
fn anglenum_grid() {
    let dir = tempfile::tempdir().unwrap();
    let coeffs = write(dir.path(), "c.json", "[0, 1, 0]");
    let out = tw(&["anglenum", "wigner", "--coeffs", coeffs.to_str().unwrap(), "--band", "1"]);
    assert_eq!(code(&out), 0);
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 5 * 8);
    for r in rows {
        let expected = if r[1] == "0" { 1.0 } else { 0.0 };
        assert_eq!(r[2].parse::<f64>().unwrap(), expected);
    }
    let short = write(dir.path(), "s.json", "[1]");
    assert_eq!(code(&tw(&["anglenum", "wigner", "--coeffs", short.to_str().unwrap(), "--band", "1"])), 3);
    assert_eq!(
        code(&tw(&["anglenum", "wigner", "--coeffs", coeffs.to_str().unwrap(), "--band", "1", "--grid", "6"])),
        2
    );
}

#[test]
fn verify_suite() {
    assert_eq!(code(&tw(&["verify", "--system", "fermion", "--modes", "2"])), 0);
    let dir = tempfile::tempdir().unwrap();
    let eps = write(dir.path(), "eps.json", "[[-1, 1], [1, -1]]");
    let out = tw(&["verify", "--system", "mixed", "--modes", "2", "--eps", eps.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["passed"], true);
    let out = tw(&["verify", "--system", "weyl", "--d", "3", "--normalized"]);
    assert_eq!(code(&out), 0);
    let out = tw(&["verify", "--modes", "2", "--inject-fault"]);
    assert_eq!(code(&out), 1);
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("FAIL projective relation"), "{stderr}");
}
