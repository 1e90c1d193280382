use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn hnp(args: &[&str]) -> (Value, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_hnp"))
        .args(args)
        .env_remove("SHA_BUDGET")
        .output()
        .expect("binary runs");
    let report: Value = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("stdout is not one JSON report ({e}): {}", String::from_utf8_lossy(&out.stdout)));
    (report, out.status.code().expect("exit code"))
}

#[test]
fn a4_both_paths() {
    let a4 = data("a4.json");
    let (r, code) = hnp(&["sha", "--group", &a4, "--subgroup", "0,1", "--p", "2", "--method", "both"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["result"], serde_json::json!([2]));
    assert_eq!(r["results"]["agreement"], true);
    assert_eq!(r["results"]["route"], "sylow_splitting");
    assert_eq!(r["exit_code"], 0);
    assert!(r.get("error").is_none());
}

#[test]
fn decomposition_group_containing_the_sylow() {
    let a4 = data("a4.json");
    let (r, code) = hnp(&["sha", "--group", &a4, "--subgroup", "0,1", "--p", "2", "--method", "both", "--dset", "sylow:2"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["result"], serde_json::json!([]));
    assert_eq!(r["results"]["raw_dset"].as_array().unwrap().len(), 1);
    assert_eq!(r["results"]["closed_dset"].as_array().unwrap().len(), 9);
}

#[test]
fn degree_table() {
    let (r, code) = hnp(&["dset", "--p", "11", "--max", "100"]);
    assert_eq!(code, 0);
    let entries = r["results"]["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 9);
    let e55 = entries.iter().find(|e| e["d"] == 55).unwrap();
    assert_eq!(e55["in_d1"], true);
    assert_eq!(r["results"]["s_min"], 33);
}

#[test]
fn prime_not_dividing_the_order() {
    let (r, code) = hnp(&["sha", "--group", &data("z6.json"), "--subgroup", "trivial", "--p", "5"]);
    assert_eq!(code, 1);
    assert_eq!(r["error"]["kind"], "HypothesisViolated");
}

#[test]
fn input_errors_exit_3() {
    let singular = r#"{"kind":"semidirect","p":3,"m":2,"matrices":[[[1,2],[2,1]]],
        "acting":{"kind":"permutations","degree":2,"generators":["(1 2)"]}}"#;
    let (r, code) = hnp(&["sha", "--group", singular, "--subgroup", "trivial"]);
    assert_eq!((code, r["error"]["kind"].as_str()), (3, Some("SchemaError")));
    let (r, code) = hnp(&["sha", "--group", r#"{"kind": "table", "n": 2,"#, "--subgroup", "trivial"]);
    assert_eq!((code, r["error"]["kind"].as_str()), (3, Some("ParseError")));
    assert!(r["error"]["message"].as_str().unwrap().contains("column"));
    let (r, code) = hnp(&["sha", "--group", &data("s3.json"), "--subgroup", "trivial", "--p", "4"]);
    assert_eq!((code, r["error"]["kind"].as_str()), (3, Some("NotPrime")));
    let (_, code) = hnp(&["sha", "--group", &data("s3.json")]);
    assert_eq!(code, 3);
}

#[test]
fn budget_exhaustion_exits_2() {
    let out = Command::new(env!("CARGO_BIN_EXE_hnp"))
        .args(["sha", "--group", &data("s3.json"), "--subgroup", "trivial", "--method", "brute"])
        .env("SHA_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["error"]["kind"], "BudgetExceeded");
}

#[test]
fn scans_and_witnesses() {
    let (r, code) = hnp(&["scan-reps", "--p", "5", "--n", "4"]);
    assert_eq!(code, 0);
    let hits = r["results"]["hits"].as_array().unwrap();
    assert!(!hits.is_empty() && hits.iter().all(|h| h["gprime_order"] == 4));
    let (r, code) = hnp(&["scan-reps", "--p", "5", "--n", "3", "--max-classes", "1"]);
    assert_eq!((code, r["results"]["conclusive"].as_bool()), (2, Some(false)));
    let (r, code) = hnp(&["witness", "--p", "2"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["prediction"], serde_json::json!([6]));
    assert_eq!(r["results"]["matches_prediction"], true);
    let (_, code) = hnp(&["witness", "--p", "2", "--variant", "ii"]);
    assert_eq!(code, 3);
    let (r, code) = hnp(&["classify", "--group", &data("a4.json"), "--subgroup", "0,1"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["classification"], serde_json::json!({"class": "alpha", "p": 2}));
}

#[test]
fn reports_are_deterministic() {
    let strip = |mut v: Value| {
        v["provenance"]["timing_ms"] = Value::Null;
        serde_json::to_string(&v).unwrap()
    };
    let a4 = data("a4.json");
    let args = ["sha", "--group", a4.as_str(), "--subgroup", "0,1", "--p", "2", "--method", "both"];
    let (a, _) = hnp(&args);
    let (b, _) = hnp(&args);
    assert_eq!(strip(a.clone()), strip(b));
    // the digest sees the parsed spec, not the path
    let inline = std::fs::read_to_string(&a4).unwrap();
    let (c, _) = hnp(&["sha", "--group", &inline, "--subgroup", "0,1", "--p", "2", "--method", "both"]);
    assert_eq!(a["inputs_digest"], c["inputs_digest"]);
    let (d, _) = hnp(&["sha", "--group", &a4, "--subgroup", "0,1", "--p", "2", "--method", "theorem"]);
    assert_ne!(a["inputs_digest"], d["inputs_digest"]);
}

#[test]
fn selftest_quick_passes() {
    let (r, code) = hnp(&["selftest", "--scope", "quick"]);
    assert_eq!(code, 0, "{}", r["results"]);
    assert_eq!(r["results"]["failed"], 0);
}
