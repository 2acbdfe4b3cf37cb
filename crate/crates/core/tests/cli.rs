//! End-to-end checks of the `dnci` binary: JSON output shapes, the
//! parse/print round trip, config handling, and exit codes.

use serde_json::Value;
use std::process::Command;

fn dnci(args: &[&str]) -> (String, String, bool) {
    let output = Command::new(env!("CARGO_BIN_EXE_dnci"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        String::from_utf8(output.stdout).expect("utf8 stdout"),
        String::from_utf8(output.stderr).expect("utf8 stderr"),
        output.status.success(),
    )
}

const BASE: &[&str] = &["--n", "2", "--l", "1", "--phi", "1,2=1/4"];

fn with_base<'a>(args: &[&'a str]) -> Vec<&'a str> {
    let mut v: Vec<&str> = BASE.to_vec();
    v.extend_from_slice(args);
    v
}

#[test]
fn normalize_reports_phase_and_monomial() {
    let (out, _, ok) = dnci(&with_base(&["normalize", "s2 s1"]));
    assert!(ok);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["phase"], "w[1,2]^-2");
    assert_eq!(v["monomial"], "s1 u2");
}

#[test]
fn isometry_pair_normalizes_to_identity() {
    let (out, _, ok) = dnci(&with_base(&["normalize", "s1* s1"]));
    assert!(ok);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["phase"], "1");
    assert_eq!(v["monomial"], "1");
}

#[test]
fn printed_elements_parse_back_to_themselves() {
    let (out, _, ok) = dnci(&with_base(&["mul", "s1 + 2*s2", "s1* - s2"]));
    assert!(ok);
    let v: Value = serde_json::from_str(&out).unwrap();
    let printed = v["element"].as_str().unwrap().to_string();

    // Round trip: multiplying the printed form by 1 must reprint the
    // exact same canonical text.
    let (out2, _, ok2) = dnci(&with_base(&["mul", &printed, "1"]));
    assert!(ok2);
    let v2: Value = serde_json::from_str(&out2).unwrap();
    assert_eq!(v2["element"], printed.as_str());
}

#[test]
fn inverse_powers_of_isometries_are_rejected() {
    let (_, err, ok) = dnci(&with_base(&["adjoint", "s1^-1"]));
    assert!(!ok);
    assert!(err.contains("unitary"), "stderr was: {err}");
}

#[test]
fn verify_emits_one_report_per_suite_and_exit_zero() {
    let (out, _, ok) = dnci(&with_base(&[
        "--K",
        "8",
        "--band",
        "2",
        "verify",
        "--suite",
        "relations",
        "--suite",
        "ktheory-table",
    ]));
    assert!(ok);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 2);
    let first: Value = serde_json::from_str(lines[0]).unwrap();
    assert_eq!(first["suite"], "relations");
    assert_eq!(first["pass"], true);
    assert_eq!(first["mode"], "exact");
    let second: Value = serde_json::from_str(lines[1]).unwrap();
    assert_eq!(second["suite"], "ktheory-table");
    assert_eq!(second["pass"], true);
}

#[test]
fn unknown_suites_fail_with_nonzero_exit() {
    let (_, err, ok) = dnci(&with_base(&["verify", "--suite", "nope"]));
    assert!(!ok);
    assert!(err.contains("unknown suite"), "stderr was: {err}");
}

#[test]
fn config_file_drives_the_signature() {
    let dir = std::env::temp_dir().join("dnci-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("config.json");
    std::fs::write(
        &path,
        r#"{
            "n": 3, "l": 2,
            "angles": [
                {"i": 1, "j": 2, "value": "1/3"},
                {"i": 2, "j": 3, "value": "2/7"}
            ],
            "truncation": {"cutoff": 6, "band": 2},
            "seed": 7,
            "suites": ["intertwiner"]
        }"#,
    )
    .unwrap();
    let (out, _, ok) = dnci(&["--config", path.to_str().unwrap(), "verify"]);
    assert!(ok);
    let v: Value = serde_json::from_str(out.lines().next().unwrap()).unwrap();
    assert_eq!(v["suite"], "intertwiner");
    assert_eq!(v["pass"], true);
    assert_eq!(v["seed"], 7);

    // Flags override the file.
    let (out, _, ok) = dnci(&["--config", path.to_str().unwrap(), "--seed", "9", "ktheory"]);
    assert!(ok);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["n"], 3);
    assert_eq!(v["k0_rank"], "1");
    assert_eq!(v["k1_rank"], "1");
}

#[test]
fn numeric_mode_accepts_decimal_angles_and_exact_rejects_them() {
    let args = [
        "--n", "2", "--l", "1", "--phi", "1,2=0.318309886", "--mode", "numeric", "--K", "6",
        "verify", "--suite", "intertwiner",
    ];
    let (out, _, ok) = dnci(&args);
    assert!(ok);
    let v: Value = serde_json::from_str(out.lines().next().unwrap()).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["mode"], "numeric");

    let bad = ["--n", "2", "--l", "1", "--phi", "1,2=0.318309886", "ktheory"];
    let (_, err, ok) = dnci(&bad);
    assert!(!ok);
    assert!(err.contains("rational"), "stderr was: {err}");
}

#[test]
fn pretty_flag_expands_json() {
    let (out, _, ok) = dnci(&with_base(&["--pretty", "ktheory"]));
    assert!(ok);
    assert!(out.lines().count() > 1);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["torsion_free"], true);
}

#[test]
fn gram_of_orthonormal_family_is_identity() {
    let (out, _, ok) = dnci(&with_base(&[
        "stinespring",
        "gram",
        "--level",
        "0",
        "1",
        "s1",
        "s1^2",
        "u2",
    ]));
    assert!(ok);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["size"], 4);
    assert_eq!(v["identity"], true);
}
