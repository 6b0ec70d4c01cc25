use std::path::PathBuf;
use std::process::{Command, Output};

fn pfl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pfl")).args(args).output().expect("run pfl")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn write(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pfl-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn check_reports_witness_and_exit_codes() {
    let good = write("good.txt", "n=5\n1,2\n1,2,3\n4,5\n");
    let bad = write("bad.json", r#"{"n": 3, "sets": [[1], [2], [3]]}"#);
    assert_eq!(code(&pfl(&["check", "--family", good.to_str().unwrap(), "-k", "3"])), 0);
    let o = pfl(&["--json", "check", "--family", bad.to_str().unwrap(), "-k", "3"]);
    assert_eq!(code(&o), 1);
    let j: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(j["witness"]["tuple"], serde_json::json!([[1], [2], [3]]));
}

#[test]
fn bad_input_is_exit_two() {
    let bad = write("dup.txt", "n=3\n1,2\n2,1\n");
    assert_eq!(code(&pfl(&["check", "--family", bad.to_str().unwrap()])), 2);
    let out_of_range = write("range.txt", "n=3\n4\n");
    assert_eq!(code(&pfl(&["check", "--family", out_of_range.to_str().unwrap()])), 2);
    // {1,2},{3},{4,5} is a 3-partition of [5]: the hypothesis fails
    let dep = write("dep.txt", "n=5\n1,2\n3\n4,5\n");
    assert_eq!(code(&pfl(&["ineq", "--eq", "2", "--family", dep.to_str().unwrap(), "-m", "2"])), 2);
    assert_eq!(
        code(&pfl(&["--no-hypothesis-check", "ineq", "--eq", "three-layer", "--family", dep.to_str().unwrap(), "-m", "2"])),
        0
    );
}

#[test]
fn json_output_is_deterministic() {
    let args = ["--json", "--seed", "7", "suite", "--only", "6,9,12"];
    let a = pfl(&args);
    let b = pfl(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let c = pfl(&["--json", "--threads", "1", "--seed", "7", "suite", "--only", "6,9,12"]);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn pmax_budget_and_convention() {
    assert_eq!(code(&pfl(&["pmax", "-n", "5", "-k", "3", "--prove-unique"])), 0);
    let o = pfl(&["--json", "--allow-empty-block-convention", "off", "pmax", "-n", "5", "-k", "3", "--prove-unique"]);
    let j: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(j["p"], 27);
    assert!(j["formula"].is_null());
    // the clock is read every 1024 nodes; n = 9 takes more than that
    assert_eq!(code(&pfl(&["--budget-seconds", "0", "pmax", "-n", "9", "-k", "3", "--prove-unique"])), 3);
}

#[test]
fn hitting_round_trip() {
    let inst = write("inst.txt", "");
    assert_eq!(code(&pfl(&["export-hitting", "-n", "4", "-k", "3", "-o", inst.to_str().unwrap()])), 0);
    let text = std::fs::read_to_string(&inst).unwrap();
    assert_eq!(text.lines().filter(|l| !l.starts_with('#') && l.contains('|')).count(), 6 + 7);
    // complement of the up-set {|G| >= 2} on [4] misses the partition {1},{2},{3,4}
    let small = write("small.txt", "n=4\n\n1\n2\n3\n4\n");
    assert_eq!(code(&pfl(&["export-hitting", "--instance", inst.to_str().unwrap(), "--hitter", small.to_str().unwrap()])), 0);
    let weak = write("weak.txt", "n=4\n\n1\n");
    assert_eq!(code(&pfl(&["export-hitting", "--instance", inst.to_str().unwrap(), "--hitter", weak.to_str().unwrap()])), 1);
}

#[test]
fn derive_and_cyclic_commands() {
    let o = pfl(&["--json", "derive", "-k", "4", "-m", "2"]);
    assert_eq!(code(&o), 0);
    let j: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(j["derivation"]["implied_bound"], 120);
    assert_eq!(code(&pfl(&["cyclic", "deficiency", "-k", "4"])), 0);
    let f = write("cyc.txt", "n=5\n1\n1,2\n2,3,4\n");
    let p = f.to_str().unwrap();
    assert_eq!(code(&pfl(&["cyclic", "injection", "--family", p, "-m", "2", "--random-order"])), 0);
    assert_eq!(code(&pfl(&["cyclic", "walk", "--families", p, p, p, "-m", "2"])), 0);
    assert_eq!(code(&pfl(&["cyclic", "expect", "--family", p, "-k", "3", "-m", "2"])), 0);
    assert_eq!(code(&pfl(&["cyclic", "arcs", "-n", "5", "-m", "2", "-k", "3", "--order", "3,1,4,5,2"])), 0);
}
