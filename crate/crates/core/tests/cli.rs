use std::path::PathBuf;
use std::process::{Command, Output};

use jsonschema::JSONSchema;
use serde_json::{json, Value};

fn pellrep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pellrep"))
        .args(args)
        .env_remove("PELLREP_PRECISION_CAP")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = pellrep(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn schema(name: &str) -> JSONSchema {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../schemas")
        .join(format!("{name}.schema.json"));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    JSONSchema::compile(&v).expect("schema compiles")
}

fn assert_valid(name: &str, doc: &str) -> Value {
    let v: Value = serde_json::from_str(doc).unwrap();
    let s = schema(name);
    if let Err(errors) = s.validate(&v) {
        let msgs: Vec<_> = errors.map(|e| format!("{} at {}", e, e.instance_path)).collect();
        panic!("{name}: {msgs:?}");
    }
    v
}

#[test]
fn check_outputs() {
    let v = assert_valid("check", &stdout(&["check", "169", "4"]));
    assert_eq!(v, json!({"d1": 2, "l1": 3, "d2": 1, "l2": 1}));
    let v = assert_valid("check", &stdout(&["check", "100", "10"]));
    assert_eq!(v, json!({"d1": 1, "l1": 1, "d2": 0, "l2": 2}));
    let v = assert_valid("check", &stdout(&["check", "121", "10"]));
    assert_eq!(v, Value::Null);
}

#[test]
fn check_csv_and_markdown() {
    let csv = stdout(&["check", "5741", "9", "--format", "csv"]);
    let mut r = csv::Reader::from_reader(csv.as_bytes());
    let rows: Vec<_> = r.records().map(|x| x.unwrap()).collect();
    assert_eq!(rows.len(), 1);
    assert_eq!(&rows[0], &csv::StringRecord::from(vec!["7", "3", "8", "1"]));
    let md = stdout(&["check", "5741", "9", "--format", "markdown"]);
    assert!(md.contains("| 7 | 3 | 8 | 1 |"));
}

#[test]
fn solve_markdown_lists_the_largest_pell_solution() {
    let md = stdout(&["solve", "--sequence", "pell", "--format", "markdown"]);
    assert!(md.contains("5741 | P_11 | 7778 (base 9)"), "{md}");
}

#[test]
fn solve_json_matches_schema() {
    let v = assert_valid("solve", &stdout(&["solve", "--sequence", "pell-lucas", "--base-min", "8", "--base-max", "10"]));
    let values: Vec<_> = v["solutions"].as_array().unwrap().iter().map(|s| s["value"].as_str().unwrap()).collect();
    assert_eq!(values, ["14", "14", "14", "34", "34", "34", "82", "82"]);
    assert_eq!(v["search_box"]["n_max"], 300);
}

#[test]
fn bounds_and_reduce_match_schema() {
    for kind in ["pell", "pell-lucas"] {
        assert_valid("bounds", &stdout(&["bounds", "--sequence", kind]));
    }
    let v = assert_valid("reduce", &stdout(&["reduce", "--sequence", "pell-lucas", "--base-min", "2", "--base-max", "2"]));
    assert_eq!(v[0]["bound"], 112);
    assert!(v[1]["bound"].as_u64().unwrap() < 300);
}

#[test]
fn reduce_csv_has_one_row_per_instance() {
    let csv = stdout(&["reduce", "--base-min", "3", "--base-max", "3", "--format", "csv"]);
    let mut r = csv::Reader::from_reader(csv.as_bytes());
    let n = r.records().count();
    // 2 leading digits, then 2 * 2 * 69 digit triples
    assert_eq!(n, 2 + 4 * 69);
}

#[test]
fn contfrac_reports_a_of_m() {
    let v = assert_valid("contfrac", &stdout(&["contfrac", "--base", "6", "--threshold", "7.39e29"]));
    assert_eq!(v["a_max"]["a"], "509");
    let v = assert_valid("contfrac", &stdout(&["contfrac", "--base", "2", "--terms", "5"]));
    assert_eq!(v["quotients"], json!(["0", "1", "3", "1", "2"]));
}

#[test]
fn identical_flags_give_identical_bytes() {
    let args = ["reduce", "--sequence", "pell", "--base-min", "7", "--base-max", "7"];
    assert_eq!(pellrep(&args).stdout, pellrep(&args).stdout);
    let args = ["bounds", "--format", "markdown"];
    assert_eq!(pellrep(&args).stdout, pellrep(&args).stdout);
}

#[test]
fn output_flag_writes_a_file() {
    let dir = std::env::temp_dir().join(format!("pellrep-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("check.json");
    let out = pellrep(&["check", "408", "7", "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_valid("check", &std::fs::read_to_string(&path).unwrap());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        &["frobnicate"][..],
        &["check", "12"],
        &["solve", "--base-min", "11"],
        &["solve", "--base-min", "7", "--base-max", "3"],
        &["solve", "--sequence", "fibonacci"],
        &["bounds", "--precision-cap", "64"],
        &["solve", "--format", "xml"],
    ] {
        let out = pellrep(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(out.stdout.is_empty());
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn precision_cap_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_pellrep"))
        .args(["bounds"])
        .env("PELLREP_PRECISION_CAP", "100")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn computational_failure_exits_two() {
    let out = pellrep(&["contfrac", "--base", "2", "--threshold", "1e400", "--precision-cap", "256"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}
