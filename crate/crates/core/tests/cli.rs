//! End-to-end runs of the `aqg` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn instance(rel: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("instances")
        .join(rel)
        .to_string_lossy()
        .into_owned()
}

fn aqg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aqg"))
        .args(args)
        .output()
        .unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn finite_instance_passes_every_suite() {
    let out = aqg(&["verify", &instance("c_z2.json"), "--suite", "all"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
}

#[test]
fn suq2_identities_at_degree_four() {
    let out = aqg(&[
        "verify",
        &instance("suq2.json"),
        "--suite",
        "identities",
        "--degree",
        "4",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["config"]["degree"], 4);
    for e in v["entries"].as_array().unwrap() {
        assert_eq!(e["pass"], true, "{e}");
        assert!(e["residual"].as_f64().unwrap() < 1e-9, "{e}");
    }
}

#[test]
fn suq2_haar_json_is_exact_and_stable_across_thread_counts() {
    let run = |jobs: &str| {
        aqg(&[
            "verify",
            &instance("suq2.json"),
            "--suite",
            "haar",
            "--format",
            "json",
            "--jobs",
            jobs,
        ])
    };
    let (one, many) = (run("1"), run("4"));
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, many.stdout);
    let v = json(&one);
    assert_eq!(v["suite"], "haar");
    for id in ["left_invariance", "right_invariance", "haar_oracle"] {
        let e = v["entries"]
            .as_array()
            .unwrap()
            .iter()
            .find(|e| e["id"] == id)
            .unwrap();
        assert_eq!(e["residual"].as_f64(), Some(0.0), "{e}");
    }
}

#[test]
fn configuration_and_input_errors_exit_with_two() {
    let suq2 = instance("suq2.json");
    let c_z2 = instance("c_z2.json");
    let bad = instance("faults/c_z2_non_associative.json");
    for args in [
        vec!["verify", suq2.as_str(), "--degree", "9"],
        vec!["verify", suq2.as_str(), "--suite", "nonsense"],
        vec!["verify", suq2.as_str(), "--z-grid", "1,x"],
        vec!["verify", c_z2.as_str(), "--q", "1/2"],
        vec!["verify", "/nonexistent.json"],
        vec!["verify", bad.as_str()],
        vec!["export", "nonsense"],
    ] {
        let out = aqg(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn export_round_trips_through_verify() {
    let out = aqg(&["export", "kac_paljutkin"]);
    assert_eq!(out.status.code(), Some(0));
    let on_disk = std::fs::read(instance("kac_paljutkin.json")).unwrap();
    assert_eq!(out.stdout, on_disk);
}
