//! End-to-end checks of the command-line surface: exit codes, JSON outputs,
//! and the certificate round trip through files.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_equidec"))
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn ehrhart_unit_interval() {
    let out = run(&["ehrhart", fixture("unit_interval.json").to_str().unwrap(), "--kmax", "6"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["quasipolynomial"]["period"], 1);
    assert_eq!(v["quasipolynomial"]["coefficients"][0][0], 1);
    assert_eq!(v["quasipolynomial"]["coefficients"][0][1], 1);
    assert_eq!(v["counts"], serde_json::json!([2, 3, 4, 5, 6, 7]));
}

#[test]
fn ehrhart_period_five() {
    let out = run(&["ehrhart", fixture("interval_1_5.json").to_str().unwrap()]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["quasipolynomial"]["period"], 5);
}

#[test]
fn classify_half_tetrahedron() {
    let out = run(&["classify", fixture("half_tetrahedron.json").to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["type"], "Delta_3^1");
}

#[test]
fn white_normal_form_output() {
    let out = run(&["white", fixture("tetra_7_12.json").to_str().unwrap()]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["q"], 12);
    assert_eq!(v["p_canonical"], 5);
}

#[test]
fn certificate_roundtrip_via_files() {
    let dir = std::env::temp_dir().join(format!("equidec-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cert = dir.join("cert.json");
    let p = fixture("intro_p.json");
    let q = fixture("intro_p_prime.json");

    let out = run(&[
        "equidecompose",
        p.to_str().unwrap(),
        q.to_str().unwrap(),
        "--out",
        cert.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(cert.exists());

    let out = run(&[
        "verify",
        p.to_str().unwrap(),
        q.to_str().unwrap(),
        cert.to_str().unwrap(),
        "--grid-depth",
        "2",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["passed"], true);

    // a corrupted certificate is rejected with exit code 1
    let text = std::fs::read_to_string(&cert).unwrap();
    let mut parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
    parsed["pairs"][0]["map"]["translation"][0] = serde_json::json!("1/2");
    let bad = dir.join("bad.json");
    std::fs::write(&bad, serde_json::to_string(&parsed).unwrap()).unwrap();
    let out = run(&[
        "verify",
        p.to_str().unwrap(),
        q.to_str().unwrap(),
        bad.to_str().unwrap(),
        "--grid-depth",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["passed"], false);

    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn equidecompose_rejects_inequivalent() {
    let out = run(&[
        "equidecompose",
        fixture("unit_tetrahedron.json").to_str().unwrap(),
        fixture("unit_cube.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("NOT_EHRHART_EQUIVALENT"), "stderr: {err}");
}

#[test]
fn malformed_input_is_exit_two() {
    let dir = std::env::temp_dir().join(format!("equidec-cli-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let out = run(&["ehrhart", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("MALFORMED_INPUT"), "stderr: {err}");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn decompose_writes_meshes() {
    let dir = std::env::temp_dir().join(format!("equidec-cli-off-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let pieces = dir.join("pieces.json");
    let meshes = dir.join("meshes");
    let out = run(&[
        "decompose",
        fixture("unit_tetrahedron.json").to_str().unwrap(),
        "--out",
        pieces.to_str().unwrap(),
        "--off",
        meshes.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["type_vector"]["Delta_3^1"], 8);
    let off_files: Vec<_> = std::fs::read_dir(&meshes).unwrap().collect();
    assert_eq!(off_files.len(), 8);
    let text = std::fs::read_to_string(&pieces).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
    let n_pieces = parsed["pieces"].as_array().unwrap().len();
    assert_eq!(n_pieces as u64, v["pieces"].as_u64().unwrap());
    std::fs::remove_dir_all(&dir).ok();
}
