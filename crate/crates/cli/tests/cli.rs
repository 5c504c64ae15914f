use std::process::{Command, Output};

use serde_json::Value;

fn tvb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tvb"))
        .args(args)
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn golden(name: &str) -> String {
    let path = format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(path).unwrap()
}

fn has_number(v: &Value) -> bool {
    match v {
        Value::Number(_) => true,
        Value::Array(xs) => xs.iter().any(has_number),
        Value::Object(m) => m.values().any(has_number),
        _ => false,
    }
}

#[test]
fn pair_primal_is_identity() {
    let out = tvb(&["pair", "--a", "1,1,1", "--variant", "primal"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    for i in 0..3 {
        for j in 0..3 {
            let want = if i == j { "1" } else { "0" };
            assert_eq!(v["pair"]["D"][i][j], want);
        }
    }
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        golden("pair_primal_1_1_1.json")
    );
}

#[test]
fn bad_weights_exit_one() {
    let out = tvb(&["pair", "--a", "0,1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("weights must be positive, need ≥ 3"), "{err}");
    assert_eq!(tvb(&["pair", "--a", "1,x,2"]).status.code(), Some(1));
}

#[test]
fn unknown_subcommand_exit_one() {
    assert_eq!(tvb(&["frobnicate", "--a", "1,1,1"]).status.code(), Some(1));
    assert_eq!(tvb(&["--help"]).status.code(), Some(0));
}

#[test]
fn fujita_dual_passes() {
    let out = tvb(&["fujita", "--a", "1,2,3,4", "--variant", "dual"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["certificate"]["verdict"], "PASS");
    assert_eq!(v["certificate"]["tidy"], true);
}

#[test]
fn output_is_deterministic_and_exact() {
    let args = [
        "nok",
        "--a",
        "1,2,3,4",
        "--flag",
        "z01;z01,z12",
        "--alpha",
        "9",
        "--beta",
        "2",
    ];
    let first = tvb(&args);
    let second = tvb(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    assert!(!has_number(&json(&first)));
    for sub in [
        vec!["pair", "--a", "2,3,5,7", "--nonnegative"],
        vec!["cox", "--a", "1,2,3", "--check-phi"],
        vec!["initial", "--a", "1,2,3", "--variant", "primal"],
        vec!["bpf", "--a", "1,2,3"],
        vec!["trees", "--leaves", "5", "--a", "1,2,3,4"],
    ] {
        let out = tvb(&sub);
        assert_eq!(out.status.code(), Some(0), "{sub:?}");
        assert!(!has_number(&json(&out)), "{sub:?}");
    }
}

#[test]
fn nok_csv_matches_golden() {
    let out = tvb(&[
        "nok",
        "--a",
        "1,2,3,4",
        "--flag",
        "z01;z01,z12",
        "--alpha",
        "5",
        "--beta",
        "1",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        golden("nok_chain_5_1.csv")
    );
}

#[test]
fn nok_primal_flag_by_index() {
    let out = tvb(&[
        "nok",
        "--a",
        "1,1,1",
        "--variant",
        "primal",
        "--flag",
        "0;0,1",
        "--alpha",
        "0",
        "--beta",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["body"]["matrix"]["M"].as_array().unwrap().len(), 5);
    let bad = tvb(&[
        "nok", "--a", "1,1,1", "--flag", "q9", "--alpha", "0", "--beta", "1",
    ]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn wellpoised_small_case() {
    let out = tvb(&["wellpoised", "--a", "1,2,3", "--degree", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let trees = v["trees"].as_array().unwrap();
    assert_eq!(trees.len(), 3);
    for t in trees {
        assert_eq!(t["status"], "PASS (verified up to degree 3)");
    }
    assert_eq!(
        tvb(&["wellpoised", "--a", "1,2,3", "--degree", "5"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn verify_flag_and_trees() {
    let out = tvb(&["verify-flag", "--a", "1,2,1,3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["all_vanish"], true);
    for (n, count) in [("4", "3"), ("5", "15"), ("6", "105")] {
        assert_eq!(json(&tvb(&["trees", "--leaves", n]))["count"], count);
    }
    assert_eq!(
        tvb(&["trees", "--leaves", "5", "--a", "1,1,1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(tvb(&["trees", "--leaves", "9"]).status.code(), Some(1));
}

#[test]
fn initial_facet_range() {
    let out = tvb(&[
        "initial",
        "--a",
        "1,2,3",
        "--variant",
        "dual",
        "--facet",
        "1",
    ]);
    let v = json(&out);
    assert_eq!(v["initial_ideals"][0]["monomial"], true);
    assert_eq!(
        v["initial_ideals"][0]["generators"],
        serde_json::json!(["z02"])
    );
    assert_eq!(
        tvb(&["initial", "--a", "1,2,3", "--facet", "3"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn output_file_written() {
    let dir = std::env::temp_dir().join(format!("tvb-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("pair.json");
    let out = tvb(&[
        "pair",
        "--a",
        "1,1,1",
        "--variant",
        "primal",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(std::fs::read(&path).unwrap(), out.stdout);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn library_entry_point() {
    let out = tvb::run_args(["tvb", "pair", "--a", "1,1,1", "--variant", "primal"]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout, golden("pair_primal_1_1_1.json"));
}
