//! End-to-end checks of the `hamsim` binary: JSON schemas, exit codes, and
//! byte-identical determinism.

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn hamsim(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_hamsim"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn ising() -> serde_json::Value {
    serde_json::json!({"pauli": {"a": 0.0, "m": [0.,0.,0.], "n": [0.,0.,0.],
                       "h": [[1.,0.,0.],[0.,0.,0.],[0.,0.,0.]]}})
}

fn heisenberg() -> serde_json::Value {
    serde_json::json!({"pauli": {"a": 0.0, "m": [0.,0.,0.], "n": [0.,0.,0.],
                       "h": [[1.,0.,0.],[0.,1.,0.],[0.,0.,1.]]}})
}

#[test]
fn factor_command_and_determinism() {
    let input = serde_json::json!({"source": ising(), "target": heisenberg()}).to_string();
    let first = hamsim(&["factor"], &input);
    assert!(first.status.success());
    let second = hamsim(&["factor"], &input);
    assert_eq!(first.stdout, second.stdout, "output must be byte-identical");

    let parsed: serde_json::Value = serde_json::from_slice(&first.stdout).unwrap();
    assert!((parsed["s"].as_f64().unwrap() - 1.0 / 3.0).abs() <= 1e-15);
    assert_eq!(parsed["verdict_under"]["LU"], serde_json::json!(false));
    assert_eq!(parsed["binding_constraints"], serde_json::json!([3]));
}

#[test]
fn full_pipeline_synthesize_then_verify() {
    let pair = serde_json::json!({"source": ising(), "target": heisenberg()}).to_string();
    let synth = hamsim(&["synthesize"], &pair);
    assert!(synth.status.success());
    let protocol: serde_json::Value = serde_json::from_slice(&synth.stdout).unwrap();
    assert!(protocol["terms"].as_array().unwrap().len() <= 3);

    let job = serde_json::json!({"protocol": protocol, "source": ising()}).to_string();
    let verify = hamsim(&["verify", "--t-sweep", "0.1,0.5,5"], &job);
    assert!(verify.status.success());
    let report: serde_json::Value = serde_json::from_slice(&verify.stdout).unwrap();
    assert!(report["reconstruction_residual"].as_f64().unwrap() <= 1e-9);
    assert_eq!(report["trotter"]["second_order"], serde_json::json!(true));
}

#[test]
fn canonicalize_command() {
    let input = serde_json::json!({"pauli": {"a": 0.5, "m": [0.1,0.,0.], "n": [0.,0.,0.],
                                   "h": [[0.,0.,0.],[0.,0.,0.],[0.,0.,1.]]}})
    .to_string();
    let out = hamsim(&["canonicalize"], &input);
    assert!(out.status.success());
    let parsed: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((parsed["h"][0].as_f64().unwrap() - 1.0).abs() <= 1e-14);
    assert_eq!(parsed["removed_local_terms"]["a"].as_f64().unwrap(), 0.5);
}

#[test]
fn separation_commands() {
    let out = hamsim(&["separation", "--example", "1", "--d", "3"], "");
    assert!(out.status.success());
    let parsed: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(parsed["certified"], serde_json::json!(true));
    assert!((parsed["witness_value"].as_f64().unwrap() + 1.0 / 3.0).abs() <= 1e-12);

    let out = hamsim(&["separation", "--example", "2"], "");
    assert!(out.status.success());
}

#[test]
fn twirl_check_command() {
    let eye4: Vec<Vec<[f64; 2]>> = (0..4)
        .map(|i| {
            (0..4)
                .map(|j| [if i == j { 1.0 } else { 0.0 }, 0.0])
                .collect()
        })
        .collect();
    let eye2: Vec<Vec<[f64; 2]>> = (0..2)
        .map(|i| {
            (0..2)
                .map(|j| [if i == j { 1.0 } else { 0.0 }, 0.0])
                .collect()
        })
        .collect();
    let input = serde_json::json!({"u": eye4, "v": eye2, "h": heisenberg()}).to_string();
    let out = hamsim(&["twirl-check"], &input);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let parsed: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(parsed["residual"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn exit_codes() {
    // 2: malformed JSON
    let out = hamsim(&["canonicalize"], "{not json");
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));

    // 2: non-Hermitian matrix
    let bad = serde_json::json!({"matrix": [
        [[0.,0.],[1.,0.],[0.,0.],[0.,0.]],
        [[0.,0.],[0.,0.],[0.,0.],[0.,0.]],
        [[0.,0.],[0.,0.],[0.,0.],[0.,0.]],
        [[0.,0.],[0.,0.],[0.,0.],[0.,0.]]
    ]})
    .to_string();
    let out = hamsim(&["canonicalize"], &bad);
    assert_eq!(out.status.code(), Some(2));

    // 1: domain failure, s above the optimum
    let pair = serde_json::json!({"source": ising(), "target": heisenberg()}).to_string();
    let out = hamsim(&["synthesize", "--s", "0.5"], &pair);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn output_file_flag() {
    let dir = std::env::temp_dir().join("hamsim_cli_test");
    std::fs::create_dir_all(&dir).unwrap();
    let input_path = dir.join("pair.json");
    let output_path = dir.join("factor.json");
    std::fs::write(
        &input_path,
        serde_json::json!({"source": heisenberg(), "target": ising()}).to_string(),
    )
    .unwrap();
    let out = hamsim(
        &[
            "factor",
            "--input",
            input_path.to_str().unwrap(),
            "--output",
            output_path.to_str().unwrap(),
        ],
        "",
    );
    assert!(out.status.success());
    let written: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&output_path).unwrap()).unwrap();
    assert!((written["s"].as_f64().unwrap() - 1.0).abs() <= 1e-15);
}
