use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_relnls");

/// Fresh output directory under the system temp dir.
fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("relnls-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(out: &PathBuf, args: &[&str]) -> Output {
    Command::new(BIN).arg("--out").arg(out).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn quick_verification_passes() {
    let dir = scratch("verify");
    let o = run(&dir, &["verify", "all", "--quick"]);
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert_eq!(code(&o), 0, "{stdout}");
    assert!(stdout.contains("PASS"));
    assert!(!stdout.contains("FAIL"));
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.join("verify_report.json")).unwrap()).unwrap();
    assert_eq!(report["header"]["tool"], "relnls");
}

#[test]
fn second_flow_has_zero_curvature() {
    let dir = scratch("zc");
    let o = run(&dir, &["akns", "verify-zc", "--n", "2"]);
    assert_eq!(code(&o), 0);
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), "[[0, 0], [0, 0]]");
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("zero_curvature_n2.json")).unwrap()).unwrap();
    assert_eq!(doc["data"]["zero"], true);
}

#[test]
fn usage_errors_exit_two() {
    let dir = scratch("usage");
    assert_eq!(code(&run(&dir, &["epoly", "gen"])), 2);
    assert_eq!(code(&run(&dir, &["evolve", "--n", "32"])), 2);
    assert_eq!(code(&run(&dir, &["burgers", "shock", "--c", "0"])), 2);
    assert_eq!(code(&run(&dir, &[])), 2);
    assert_eq!(code(&run(&dir, &["--help"])), 0);
}

#[test]
fn json_config_matches_flags_and_rejects_unknown_keys() {
    let dir = scratch("json");
    let good = dir.join("good.json");
    fs::write(&good, r#"{"command": ["akns", "verify-zc"], "n": 2}"#).unwrap();
    let o = run(&dir, &["--json-config", good.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), "[[0, 0], [0, 0]]");

    let bad = dir.join("bad.json");
    fs::write(&bad, r#"{"command": ["akns", "verify-zc"], "n": 2, "bogus": 1}"#).unwrap();
    assert_eq!(code(&run(&dir, &["--json-config", bad.to_str().unwrap()])), 2);
}

#[test]
fn same_config_same_bytes() {
    let args = ["--seed", "7", "evolve", "--ic", "soliton", "--steps", "40", "--noise", "0.01", "--snapshot-every", "20"];
    let (a, b) = (scratch("det-a"), scratch("det-b"));
    assert_eq!(code(&run(&a, &args)), 0);
    assert_eq!(code(&run(&b, &args)), 0);
    for name in ["observables.csv", "observables.gp", "snapshots/header.json", "snapshots/psi_00000040.bin"] {
        assert_eq!(fs::read(a.join(name)).unwrap(), fs::read(b.join(name)).unwrap(), "{name}");
    }
    let other = scratch("det-c");
    let mut args2 = args;
    args2[1] = "8";
    assert_eq!(code(&run(&other, &args2)), 0);
    assert_ne!(fs::read(a.join("observables.csv")).unwrap(), fs::read(other.join("observables.csv")).unwrap());
}

#[test]
fn artifacts_carry_the_header() {
    let dir = scratch("header");
    assert_eq!(code(&run(&dir, &["burgers", "shock", "--profile", "neg-tanh"])), 0);
    let csv = fs::read_to_string(dir.join("shock.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "# tool: relnls");
    assert!(lines[1].starts_with("# version: "));
    let hash = lines[2].strip_prefix("# config_sha256: ").unwrap();
    assert_eq!(hash.len(), 64);
    assert!(lines[3].starts_with("# params: "));
    assert!(lines[4].starts_with("x,"));

    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.join("shock.json")).unwrap()).unwrap();
    assert_eq!(doc["header"]["config_sha256"], hash);
    assert!((doc["data"]["shock_time"].as_f64().unwrap() - 1.0).abs() < 1e-10);
}

#[test]
fn backlund_closure_from_the_command_line() {
    let dir = scratch("backlund");
    let o = run(&dir, &["burgers", "backlund", "--seed", "gaussian"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    assert!(dir.join("backlund.csv").exists());
}
