use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const NOTCH: &str = "x,y\n0,0\n8,0\n8,8\n6,8\n6,3\n4,5\n2,3\n2,8\n0,8\n0,4\n";

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shapeparts"))
        .args(args)
        .arg("--out-dir")
        .arg(dir.join("out"))
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn fixture() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("notch.csv"), NOTCH).unwrap();
    dir
}

const FAST: [&str; 4] = ["--samples", "48", "--null-graphs", "20"];

#[test]
fn writes_a_record_per_shape() {
    let dir = fixture();
    let out = run(
        dir.path(),
        &[&["notch.csv", "--seed", "5"][..], &FAST].concat(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = fs::read_to_string(dir.path().join("out/notch.json")).unwrap();
    let rec: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(rec["point_count"], 48);
    assert_eq!(rec["config"]["rng_seed"], 5);
    assert_eq!(rec["radius"]["source"], "estimated");
    assert!(rec["threshold"].get("samples").is_none());
    assert_eq!(
        rec["k"].as_u64().unwrap() as usize,
        rec["clusters"].as_array().unwrap().len()
    );
    assert!(!dir.path().join("out/notch.svg").exists());
}

#[test]
fn svg_matrices_and_radius_override() {
    let dir = fixture();
    let args = [
        &[
            "notch.csv",
            "--format",
            "both",
            "--dump-matrices",
            "--radius",
            "10",
        ][..],
        &["--verbose-samples", "--postprocess"],
        &FAST,
    ]
    .concat();
    let out = run(dir.path(), &args);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let o = dir.path().join("out");
    let svg = fs::read_to_string(o.join("notch.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("unassigned"));
    let d = fs::read_to_string(o.join("notch.D.txt")).unwrap();
    assert_eq!(d.lines().next(), Some("48"));
    assert_eq!(d.lines().count(), 49);
    let rec: Value =
        serde_json::from_str(&fs::read_to_string(o.join("notch.json")).unwrap()).unwrap();
    assert_eq!(rec["radius"]["value"], 10);
    assert_eq!(rec["radius"]["source"], "override");
    assert!(rec["threshold"]["samples"].is_array());
    assert!(rec.get("postprocess").is_some());
}

#[test]
fn same_seed_same_bytes() {
    let dir = fixture();
    let args = [&["notch.csv", "--seed", "2", "--format", "both"][..], &FAST].concat();
    assert!(run(dir.path(), &args).status.success());
    let o = dir.path().join("out");
    let first = (
        fs::read(o.join("notch.json")).unwrap(),
        fs::read(o.join("notch.svg")).unwrap(),
    );
    assert!(run(dir.path(), &args).status.success());
    let second = (
        fs::read(o.join("notch.json")).unwrap(),
        fs::read(o.join("notch.svg")).unwrap(),
    );
    assert_eq!(first, second);
}

#[test]
fn failures_are_reported_and_the_rest_still_run() {
    let dir = fixture();
    fs::write(dir.path().join("bad.csv"), "0,0\n1,1\n").unwrap();
    let args = [&["missing.csv", "bad.csv", "notch.csv"][..], &FAST].concat();
    let out = run(dir.path(), &args);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("missing.csv") && err.contains("bad.csv"),
        "{err}"
    );
    assert!(dir.path().join("out/notch.json").exists());
}

#[test]
fn illegal_radius_fails() {
    let dir = fixture();
    let out = run(
        dir.path(),
        &[&["notch.csv", "--radius", "24"][..], &FAST].concat(),
    );
    assert!(!out.status.success());
}

#[test]
fn too_few_samples_fails() {
    let dir = fixture();
    let out = run(
        dir.path(),
        &["notch.csv", "--samples", "7", "--null-graphs", "5"],
    );
    assert!(!out.status.success());
}
