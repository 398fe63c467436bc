use std::collections::BTreeSet;
use std::process::{Command, Output};

use serde_json::Value;

fn gcv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gcv")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = gcv(&full);
    let v = serde_json::from_slice(&out.stdout).expect("json on stdout");
    (out.status.code().unwrap(), v)
}

#[test]
fn broughton_kinf() {
    let (code, v) = json(&["--field", "complex", "--set", "kinf", "--bounds", "1,1", "x + x^2*y"]);
    assert_eq!(code, 0);
    let k = &v["results"]["kinf"];
    assert_eq!(k["eliminant"], "y");
    assert_eq!(k["completeness"], "reduced-bounds-sound-only");
    assert_eq!(k["values"][0]["exact"], "0");
    assert!(v["results"].get("k0").is_none());
}

#[test]
fn quintic_real_lists_the_candidate_but_not_the_value() {
    let (code, v) = json(&["--field", "real", "--set", "kinf", "--bounds", "1,0", "--vars", "x,y", "x*(x^2+1)^2"]);
    assert_eq!(code, 0);
    let k = &v["results"]["kinf"];
    assert_eq!(k["values"].as_array().unwrap().len(), 0);
    let roots = k["real_roots"].as_array().unwrap();
    assert_eq!(roots.len(), 1);
    assert_eq!(roots[0]["exact"], "0");
    assert_eq!(roots[0]["certification"]["status"], "uncertified");
}

#[test]
fn critical_values_of_a_cubic() {
    let (code, v) = json(&["--set", "k0", "x^3 - 3*x"]);
    assert_eq!(code, 0);
    let exact: Vec<&str> = v["results"]["k0"]["values"].as_array().unwrap().iter().map(|x| x["exact"].as_str().unwrap()).collect();
    assert_eq!(exact, ["-2", "2"]);
    assert_eq!(v["results"]["k0"]["completeness"], "exact");
}

#[test]
fn text_output() {
    let out = gcv(&["--set", "k0", "x^3 - 3*x"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("K0: {-2, 2}"), "{text}");
}

#[test]
fn non_properness_of_a_map() {
    let (code, v) = json(&["--bounds", "1,1", "x; x*y"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["sf"]["ideal"], serde_json::json!(["y1"]));
    assert_eq!(v["results"]["sf"]["empty"], false);
}

#[test]
fn parse_errors_exit_2_with_position() {
    let (code, v) = json(&["x + * y"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "parse");
    assert_eq!(v["error"]["position"], 4);
    let out = gcv(&["2x"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn invalid_requests_exit_2() {
    assert_eq!(json(&["--set", "sf", "x + y"]).0, 2);
    assert_eq!(json(&["--set", "kinf", "x; y"]).0, 2);
    assert_eq!(json(&["--set", "kinf", "--bounds", "0,1", "x*y"]).0, 2);
    assert_eq!(json(&["--vars", "x,y", "5"]).0, 2);
}

#[test]
fn limits_exit_3() {
    let (code, v) = json(&["--paper-bounds", "--field", "real", "x^3 + y^3 + x*y"]);
    assert_eq!(code, 3);
    assert_eq!(v["error"]["kind"], "limit-exceeded");
    assert_eq!(v["error"]["limit"], "max-arc-vars");
    assert!(v["error"]["message"].as_str().unwrap().contains("D1=176"));

    let (code, v) = json(&["--max-pairs", "1", "--set", "kinf", "--bounds", "2,3", "x + x^2*y"]);
    assert_eq!(code, 3);
    assert_eq!(v["error"]["limit"], "max-pairs");
}

#[test]
fn limits_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_gcv"))
        .args(["--json", "--set", "k0", "x^3 - 3*x"])
        .env("GCV_MAX_PAIRS", "1234")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["config"]["limits"]["max_pairs"], 1234);
}

#[test]
fn reports_are_byte_identical() {
    let args = ["--json", "--field", "real", "--bounds", "1,1", "--seed", "11", "x + x^2*y"];
    let a = gcv(&args).stdout;
    assert_eq!(a, gcv(&args).stdout);
    assert_eq!(a, gcv(&args).stdout);
}

#[test]
fn timings_are_opt_in() {
    let (_, v) = json(&["--set", "k0", "x^3 - 3*x"]);
    assert!(v["results"]["k0"]["diagnostics"].get("elapsed_ms").is_none());
    let (_, v) = json(&["--timings", "--set", "k0", "x^3 - 3*x"]);
    assert!(v["results"]["k0"]["diagnostics"]["elapsed_ms"].is_u64());
}

fn shape(v: &Value, path: String, out: &mut BTreeSet<String>) {
    let kind = match v {
        Value::Null => "null",
        Value::Bool(_) => "bool",
        Value::Number(_) => "number",
        Value::String(_) => "string",
        Value::Array(_) => "array",
        Value::Object(_) => "object",
    };
    out.insert(format!("{path}: {kind}"));
    match v {
        Value::Array(items) => items.iter().for_each(|x| shape(x, format!("{path}[]"), out)),
        Value::Object(m) => m.iter().for_each(|(k, x)| shape(x, format!("{path}.{k}"), out)),
        _ => {}
    }
}

/// Field names and nesting of the report, checked against a golden file.
#[test]
fn json_schema_is_stable() {
    let mut paths = BTreeSet::new();
    for args in [
        &["--field", "real", "--bounds", "1,1", "--dump-system", "--timings", "x + x^2*y"][..],
        &["--bounds", "1,0", "--vars", "x,y", "x*(x^2+1)^2"][..],
        &["--bounds", "1,1", "--dump-system", "x; x*y"][..],
        &["x +"][..],
        &["--paper-bounds", "--field", "real", "x^3 + y^3"][..],
    ] {
        shape(&json(args).1, "$".into(), &mut paths);
    }
    let got: String = paths.into_iter().map(|p| p + "\n").collect();
    let golden = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden/schema.txt");
    if std::env::var_os("GCV_BLESS").is_some() {
        std::fs::write(golden, &got).unwrap();
    }
    let want = std::fs::read_to_string(golden).expect("golden schema file");
    assert_eq!(got, want, "report schema changed; rerun with GCV_BLESS=1 if intended");
}
