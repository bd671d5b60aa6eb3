//! End-to-end tests of the command-line binary: one process per case,
//! JSON over standard output, exit codes as documented.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gfermat"))
}

fn write_curve(dir: &Path, name: &str, spec: &Value) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string(spec).unwrap()).unwrap();
    path
}

fn golden(dir: &Path) -> PathBuf {
    write_curve(
        dir,
        "c33.json",
        &json!({ "field": { "kind": "prime", "p": 13 }, "k": 3, "lambdas": [4], "n": 3 }),
    )
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a single JSON object")
}

#[test]
fn genus_reports_the_golden_curve() {
    let dir = TempDir::new().unwrap();
    let curve = golden(dir.path());
    let out = bin().args(["genus", "-c"]).arg(&curve).output().unwrap();
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["genus"], json!(10));
    assert_eq!(v["canonical_degree"], json!(18));
    assert_eq!(v["schema"], json!("gfermat/1"));
    assert_eq!(v["curve"].as_str().unwrap().len(), 64);
}

#[test]
fn describe_lists_forms_and_branch_values() {
    let dir = TempDir::new().unwrap();
    let curve = golden(dir.path());
    let out = bin().args(["describe", "-c"]).arg(&curve).output().unwrap();
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["forms"].as_array().unwrap().len(), 2);
    assert_eq!(v["branch_values"], json!(["inf", "0", "1", "4"]));
}

#[test]
fn smooth_confirms_full_jacobian_rank() {
    let dir = TempDir::new().unwrap();
    let curve = golden(dir.path());
    let out = bin().args(["smooth", "-c"]).arg(&curve).output().unwrap();
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["smooth"], json!(true));
    assert_eq!(v["points_checked"], json!(36));
}

#[test]
fn aut_reports_group_orders_and_lifts() {
    let dir = TempDir::new().unwrap();
    let curve = golden(dir.path());
    let out = bin().args(["aut", "-c"]).arg(&curve).output().unwrap();
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["g0_order"], json!(12));
    assert_eq!(v["L_order"], json!(324));
    assert_eq!(v["h0_normal"], json!(true));
    assert_eq!(v["lifts"].as_array().unwrap().len(), 12);
    assert_eq!(v["g0"].as_array().unwrap().len(), 12);
}

#[test]
fn pluecker_closes_the_recurrence() {
    let dir = TempDir::new().unwrap();
    let curve = golden(dir.path());
    let out = bin().args(["pluecker", "-c"]).arg(&curve).output().unwrap();
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["d"], json!([9, 36, 45, 0]));
    assert_eq!(v["closure"], json!(true));
    assert_eq!(v["totals"]["match"], json!(true));
}

#[test]
fn points_census_with_orbits() {
    let dir = TempDir::new().unwrap();
    let curve = golden(dir.path());
    let out = bin().args(["points", "-c"]).arg(&curve).output().unwrap();
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["count"], json!(9));
    assert_eq!(v["orbit_sizes"], json!({ "9": 1 }));
    assert_eq!(v["weil"]["ok"], json!(true));
    assert_eq!(v["orbit_checks"]["fibers_single_orbits"], json!(true));
}

#[test]
fn osculate_single_point_and_survey() {
    let dir = TempDir::new().unwrap();
    let curve = golden(dir.path());
    let out = bin()
        .args(["osculate", "--point", "0", "-c"])
        .arg(&curve)
        .output()
        .unwrap();
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["points"][0]["h"], json!([0, 1, 3, 6]));
    assert_eq!(v["points"][0]["hyperosculating"], json!(true));

    let out = bin()
        .args(["osculate", "--samples", "2", "-c"])
        .arg(&curve)
        .output()
        .unwrap();
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["fixed"].as_array().unwrap().len(), 36);
    assert_eq!(v["samples"].as_array().unwrap().len(), 2);
    assert_eq!(v["all_fixed_hyperosculating"], json!(true));
    assert_eq!(v["all_samples_classical"], json!(true));
}

#[test]
fn qform_accepts_the_identity_in_its_regime() {
    let dir = TempDir::new().unwrap();
    let curve = write_curve(
        dir.path(),
        "c33gf4.json",
        &json!({
            "field": { "kind": "extension", "p": 2, "degree": 2 },
            "k": 3,
            "lambdas": [[0, 1]],
            "n": 3,
        }),
    );
    let matrix = dir.path().join("id.json");
    std::fs::write(
        &matrix,
        serde_json::to_string(&json!([
            [1, 0, 0, 0],
            [0, 1, 0, 0],
            [0, 0, 1, 0],
            [0, 0, 0, 1],
        ]))
        .unwrap(),
    )
    .unwrap();
    let out = bin()
        .args(["qform", "-c"])
        .arg(&curve)
        .arg("--matrix")
        .arg(&matrix)
        .output()
        .unwrap();
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["pass"], json!(true));
    assert_eq!(v["q"], json!(2));
    assert!(v["b"].is_array());
}

#[test]
fn validation_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let out = bin().arg("genus").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let v = stdout_json(&out);
    assert_eq!(v["error"]["code"], json!(2));
    assert_eq!(v["error"]["context"], json!("genus"));

    let bad = write_curve(dir.path(), "bad.json", &json!({ "k": 3 }));
    let out = bin().args(["genus", "-c"]).arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    let curve = golden(dir.path());
    let out = bin()
        .args(["points", "--q", "170", "-c"])
        .arg(&curve)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn budget_overruns_exit_four() {
    let dir = TempDir::new().unwrap();
    let curve = golden(dir.path());
    let out = bin()
        .args(["points", "--q", "2197", "--budget", "1000", "-c"])
        .arg(&curve)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
    let v = stdout_json(&out);
    assert_eq!(v["error"]["code"], json!(4));
}

#[test]
fn identical_invocations_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let curve = golden(dir.path());
    let run = || {
        bin()
            .args(["osculate", "--samples", "3", "-c"])
            .arg(&curve)
            .output()
            .unwrap()
    };
    let a = run();
    let b = run();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let seeded = bin()
        .args(["osculate", "--samples", "3", "--seed", "7", "-c"])
        .arg(&curve)
        .output()
        .unwrap();
    assert!(seeded.status.success());
    assert_ne!(seeded.stdout, a.stdout);
}

#[test]
fn out_flag_redirects_the_report() {
    let dir = TempDir::new().unwrap();
    let curve = golden(dir.path());
    let path = dir.path().join("genus.json");
    let out = bin()
        .args(["genus", "-c"])
        .arg(&curve)
        .arg("--out")
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["genus"], json!(10));
}

#[test]
fn thread_cap_does_not_change_output() {
    let dir = TempDir::new().unwrap();
    let curve = golden(dir.path());
    let capped = bin()
        .args(["aut", "-c"])
        .arg(&curve)
        .env("GFERMAT_THREADS", "1")
        .output()
        .unwrap();
    let free = bin().args(["aut", "-c"]).arg(&curve).output().unwrap();
    assert!(capped.status.success());
    assert_eq!(capped.stdout, free.stdout);
}
