use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ks-alg")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn enumerate_is_deterministic() {
    let a = stdout(&["enumerate", "-n", "2", "-k", "1", "-S", "1"]);
    let b = stdout(&["enumerate", "-n", "2", "-k", "1", "-S", "1"]);
    assert_eq!(a, b);
    assert!(!a.is_empty());
}

#[test]
fn truncation_keeps_only_interior_states() {
    let out = stdout(&["enumerate", "-n", "2", "-k", "1", "--flavor", "bprime"]);
    assert!(out.lines().filter(|l| l.starts_with('{')).all(|l| l.starts_with("{1} {1}")), "{out}");
}

#[test]
fn products() {
    let out = stdout(&["multiply", "-n", "1", "-k", "1", "f[{0},{1}]", "f[{1},{0}]"]);
    assert_eq!(out.trim(), "U1^1*f[{0},{0}]");
    let out = stdout(&["multiply", "-n", "2", "-k", "1", "f[{0},{1}]", "f[{0},{1}]"]);
    assert_eq!(out.trim(), "0");
}

#[test]
fn differential_of_a_crossing() {
    let out = stdout(&["diff", "-n", "1", "-k", "1", "-S", "1", "C1*f[{0},{0}]"]);
    assert_eq!(out.trim(), "U1^1*f[{0},{0}]");
}

#[test]
fn bad_input_exits_two() {
    assert_eq!(run(&["enumerate", "-n", "3", "-S", "4"]).status.code(), Some(2));
    assert_eq!(run(&["multiply", "-n", "1", "f[{0}", "f[{0},{0}]"]).status.code(), Some(2));
}

#[test]
fn homology_matches_closed_form() {
    stdout(&["homology", "-n", "1", "-k", "1", "-S", "1"]);
    stdout(&["homology", "-n", "3", "-k", "2", "-S", "1,3", "--flavor", "bprime", "--cap", "6"]);
}

#[test]
fn formality_verdicts() {
    let out = stdout(&["formality", "-n", "2", "-k", "1", "-S", "1"]);
    assert!(out.contains("non-formal") && out.contains("C1*f[{1},{2}]"), "{out}");
    let out = stdout(&["formality", "-n", "3", "-k", "3", "-S", "2"]);
    assert!(out.contains(": formal") && out.contains("ZeroOnExterior"), "{out}");
    let out = stdout(&["formality", "-n", "4", "-k", "2", "-S", "1,4", "--flavor", "bprime"]);
    assert!(out.contains(": formal") && out.contains("Section"), "{out}");
}

#[test]
fn verify_small_sweep() {
    stdout(&["verify", "-n", "1", "-k", "1"]);
    stdout(&["verify", "-n", "2", "--all-k", "--all-S", "--cap", "6"]);
}

#[test]
fn json_carries_schema() {
    let out = stdout(&["formality", "-n", "2", "-k", "1", "-S", "1", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema"], "ks-alg/1");
    assert_eq!(v["verdicts"][0]["formal"], false);
    assert_eq!(v["verdicts"][0]["evidence"]["kind"], "massey");
}
