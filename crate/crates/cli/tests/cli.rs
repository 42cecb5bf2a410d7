use serde_json::Value;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_distinction"))
        .args(args)
        .output()
        .unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn exists_for_square_alpha() {
    let doc = json(&[
        "--mode", "exists", "--p", "3", "--r", "2", "--d", "1", "--e", "2", "--f", "1", "--quad",
        "ram", "--alpha", "square",
    ]);
    assert_eq!(doc["report"]["tau_char_exists"]["value"], Value::Bool(true));
    assert!(doc["report"]["tau_char_exists"]["by"].is_string());
    assert_eq!(
        doc["provenance"]["tau_char_exists"],
        doc["report"]["tau_char_exists"]["by"]
    );
    assert!(doc["version"].is_string());
}

#[test]
fn level0_epsilon_split_unramified_k() {
    let doc = json(&[
        "--mode",
        "epsilon",
        "--p",
        "3",
        "--r",
        "2",
        "--d",
        "1",
        "--alpha",
        "unit-nonsquare",
    ]);
    let reps = doc["report"]["representations"].as_array().unwrap();
    let s1 = reps.iter().find(|r| r["s"]["value"] == 1).unwrap();
    assert_eq!(s1["e_K"]["value"], 1);
}

#[test]
fn every_numeric_field_is_tagged() {
    let doc = json(&[
        "--mode",
        "invariants",
        "--p",
        "5",
        "--r",
        "2",
        "--d",
        "2",
        "--e",
        "2",
        "--f",
        "1",
        "--quad",
        "ram",
        "--alpha",
        "unif",
    ]);
    fn walk(v: &Value, inside_tag: bool) {
        match v {
            Value::Number(_) => assert!(inside_tag, "untagged number"),
            Value::Object(o) if o.contains_key("by") => walk(&o["value"], true),
            Value::Object(o) if o.contains_key("rep_exponent") || o.contains_key("zeta") => {}
            Value::Object(o) => o.values().for_each(|x| walk(x, inside_tag)),
            Value::Array(a) => a.iter().for_each(|x| walk(x, inside_tag)),
            _ => {}
        }
    }
    let mut report = doc["report"].clone();
    report.as_object_mut().unwrap().remove("beta");
    walk(&report, false);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["--mode", "nonsense"]).status.code(), Some(2));
    assert_eq!(
        run(&[
            "--mode", "exists", "--p", "3", "--r", "2", "--d", "1", "--e", "2", "--f", "1",
            "--deg", "3", "--alpha", "unif"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        run(&["--mode", "exists", "--p", "3", "--r", "1", "--d", "2", "--alpha", "square"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        run(&["--mode", "exists", "--p", "4", "--r", "2", "--d", "1", "--alpha", "unif"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        run(&[
            "--mode", "exists", "--p", "3", "--r", "2", "--d", "1", "--e", "3", "--f", "1",
            "--quad", "ram", "--alpha", "unif"
        ])
        .status
        .code(),
        Some(3)
    );
    assert_eq!(
        run(&["--mode", "verify", "--p", "3"]).status.code(),
        Some(2)
    );
}

#[test]
fn single_tuple_sweep_agrees_with_run() {
    let args = [
        "--p",
        "5",
        "--f0",
        "1",
        "--r",
        "2",
        "--d",
        "2",
        "--e",
        "2",
        "--f",
        "1",
        "--quad",
        "ram",
        "--alpha",
        "unif-nonsquare",
        "--zeta",
        "1",
        "--beta-val",
        "1",
        "--beta-zeta",
        "0",
    ];
    let mut sweep_args = vec!["--mode", "sweep"];
    sweep_args.extend(args);
    let sweep = json(&sweep_args);
    let n = sweep["report"]["tuples"]["value"].as_u64().unwrap();
    assert!(n >= 1, "filter matched nothing");
    assert_eq!(sweep["report"]["passed"], Value::Bool(true));
    let mut run_args = vec!["--mode", "verdict", "--symplectic", "true"];
    run_args.extend(args);
    let doc = json(&run_args);
    assert!(doc["report"]["verdict"]["value"].is_string());
}

#[test]
fn unramified_sweep_satisfies_filters() {
    let doc = json(&[
        "--mode",
        "sweep",
        "--primes",
        "3,5",
        "--quad",
        "unram",
        "--max-two-n",
        "6",
    ]);
    assert_eq!(doc["report"]["passed"], Value::Bool(true));
    assert!(doc["report"]["tuples"]["value"].as_u64().unwrap() > 0);
}

#[test]
fn table_mode_is_aligned() {
    let out = run(&[
        "--mode", "count", "--p", "3", "--r", "2", "--d", "1", "--alpha", "square", "--table",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    let starts: Vec<usize> = text
        .lines()
        .map(|l| l.len() - l[l.find("  ").unwrap()..].trim_start().len())
        .collect();
    assert!(starts.len() > 3);
    assert!(starts.windows(2).all(|w| w[0] == w[1]));
}
