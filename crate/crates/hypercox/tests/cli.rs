use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use hypercox::driver::{run_dimension, DriverOptions, Status};
use hypercox::format::{parse_coxeter, write_coxeter};
use hypercox_core::diagram::canonical_key;
use hypercox_core::search::SearchSpec;
use serde_json::Value;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

/// Exit code, stdout and stderr of the binary run from the workspace root.
fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_hypercox"))
        .args(args)
        .current_dir(root())
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hypercox-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn classify_reports_the_fixture_signature() {
    let (code, out, _) = run(&["classify", "fixtures/h16.cox", "--json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["nodes"], 19);
    assert_eq!(v["signature"], serde_json::json!([16, 1, 2]));
}

#[test]
fn gale_validate_accepts_the_pentagon() {
    let (code, out, _) = run(&["gale", "validate", "fixtures/pentagon.gale"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "standard, n=2");
}

#[test]
fn verify_exit_codes() {
    let (code, out, _) = run(&["verify", "fixtures/pentagon.cox", "--symmetric"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.starts_with("valid"));
    assert!(out.contains("compact"));
    // five unknown weights and too few equations without the symmetry
    let (code, _, err) = run(&["verify", "fixtures/pentagon.cox"]);
    assert_eq!(code, 2);
    assert!(err.contains("error"));

    let dir = scratch("verify");
    let identity = dir.join("identity.cox");
    fs::write(&identity, "coxeter v1\nnodes 5\n").unwrap();
    let (code, out, _) = run(&[
        "verify",
        identity.to_str().unwrap(),
        "--gale",
        "fixtures/pentagon.gale",
    ]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("failed"));
}

#[test]
fn parse_errors_name_the_line() {
    let dir = scratch("parse");
    let bad = dir.join("bad.cox");
    fs::write(&bad, "coxeter v1\nnodes 3\nedge 0 7 3\n").unwrap();
    let (code, _, err) = run(&["classify", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn verify_json_round_trips() {
    let (code, out, _) = run(&["verify", "fixtures/h16.cox", "--json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let c = &v["certificate"];
    assert_eq!(c["verdict"], "valid");
    assert_eq!(c["facets"], 19);
    assert_eq!(c["signature"], serde_json::json!([16, 1, 2]));
    assert_eq!(c["compact"], false);
    let text = v["diagram"].as_str().unwrap();
    let d = parse_coxeter(text).unwrap();
    let fixture =
        parse_coxeter(&fs::read_to_string(root().join("fixtures/h16.cox")).unwrap()).unwrap();
    assert_eq!(canonical_key(&d), canonical_key(&fixture));
    assert_eq!(parse_coxeter(&write_coxeter(&d)).unwrap(), d);
}

/// A small slice of dimension 16 that still contains its polytope.
const SLICE: [&str; 6] = ["enumerate", "--dim", "16", "--k-max", "6", "--json"];

#[test]
fn enumerate_is_deterministic_and_resumable() {
    let (code, one, _) = run(&[&SLICE[..], &["--jobs", "1"]].concat());
    assert_eq!(code, 0);
    let (code, two, _) = run(&[&SLICE[..], &["--jobs", "2"]].concat());
    assert_eq!(code, 0);
    assert_eq!(one, two);
    let v: Value = serde_json::from_str(&one).unwrap();
    assert_eq!(v["polytopes"].as_array().unwrap().len(), 1);

    let dir = scratch("resume");
    let ck = dir.join("run.json");
    let ck = ck.to_str().unwrap();
    let (code, partial, _) = run(&[
        &SLICE[..],
        &["--jobs", "1", "--budget-secs", "1", "--checkpoint", ck],
    ]
    .concat());
    assert_eq!(code, 3, "{partial}");
    let p: Value = serde_json::from_str(&partial).unwrap();
    assert_eq!(p["status"], "incomplete");
    assert!(p["remaining"].as_u64().unwrap() > 0);
    let (code, resumed, _) =
        run(&[&SLICE[..], &["--jobs", "1", "--checkpoint", ck, "--resume"]].concat());
    assert_eq!(code, 0);
    let mut r: Value = serde_json::from_str(&resumed).unwrap();
    let mut o: Value = serde_json::from_str(&one).unwrap();
    // only the checkpoint path differs
    r["checkpoint"] = Value::Null;
    o["checkpoint"] = Value::Null;
    assert_eq!(r, o);
}

#[test]
fn driver_checkpoint_survives_a_zero_budget() {
    let dir = scratch("driver");
    let spec = SearchSpec {
        k_max: Some(4),
        ..SearchSpec::new(17)
    };
    let ck = dir.join("c.json");
    let stopped = run_dimension(
        &spec,
        &DriverOptions {
            budget: Some(std::time::Duration::ZERO),
            checkpoint: Some(ck.clone()),
            ..Default::default()
        },
    )
    .unwrap();
    assert_eq!(stopped.status, Status::Incomplete);
    assert!(stopped.remaining > 0);
    assert!(ck.exists());
    let resumed = run_dimension(
        &spec,
        &DriverOptions {
            checkpoint: Some(ck.clone()),
            resume: true,
            ..Default::default()
        },
    )
    .unwrap();
    let direct = run_dimension(&spec, &DriverOptions::default()).unwrap();
    assert_eq!(resumed.status, Status::Complete);
    assert_eq!(resumed.report, direct.report);

    // a checkpoint for other parameters is refused
    let other = SearchSpec {
        k_max: Some(5),
        ..spec
    };
    assert!(run_dimension(
        &other,
        &DriverOptions {
            checkpoint: Some(ck),
            resume: true,
            ..Default::default()
        }
    )
    .is_err());
}

#[test]
fn theorem_run_without_fixture_still_checks_uniqueness() {
    let (code, out, _) = run(&[
        "reproduce-theorem",
        "--fixture",
        "fixtures/absent.cox",
        "--k-max",
        "6",
    ]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("fixture missing"));
    assert!(out.contains("overrides: k_max = 6"));
    assert_eq!(
        out.lines().filter(|l| l.starts_with("[pass]")).count(),
        3,
        "{out}"
    );
}
