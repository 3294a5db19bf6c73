//! End-to-end runs of the command-line front end, with JSON output checked
//! against the schemas under `schemas/`.

use std::path::PathBuf;

use divcon::cli::{run, EXIT_FAIL, EXIT_OK, EXIT_USAGE};
use serde_json::Value;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn divcon(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("divcon").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn validate(schema: &str, doc: &Value) {
    let path = root().join("schemas").join(format!("{schema}.schema.json"));
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let compiled = jsonschema::JSONSchema::compile(&schema).expect("schema compiles");
    if let Err(errors) = compiled.validate(doc) {
        let msgs: Vec<String> = errors.map(|e| format!("{} at {}", e, e.instance_path)).collect();
        panic!("{} violations: {}", path.display(), msgs.join("; "));
    };
}

fn json_run(schema: &str, args: &[&str], code: i32) -> Value {
    let (got, out, err) = divcon(args);
    assert_eq!(got, code, "{args:?}: {err}");
    let doc: Value = serde_json::from_str(&out).expect("one JSON document");
    validate(schema, &doc);
    doc
}

fn path(rel: &str) -> String {
    root().join(rel).to_string_lossy().into_owned()
}

#[test]
fn baskets_json() {
    let doc = json_run("baskets", &["baskets", "--rmax", "8", "--json"], EXIT_OK);
    let types = doc["types"].as_array().unwrap();
    assert_eq!(types.len(), 17);
    assert_eq!(types[0]["instances"][0]["basket"], "{(6,3)}");
    assert_eq!(types[0]["instances"][0]["value"], "1/2");
}

#[test]
fn covers_json() {
    let doc = json_run("covers", &["covers", "--rmax", "12", "--json"], EXIT_OK);
    let steps = doc["steps"].as_array().unwrap();
    assert!(steps.iter().any(|s| s["source_type"] == 2 && s["p"] == 7 && s["target"] == "{}"));
    assert!(!steps.iter().any(|s| s["source_type"] == 1 && s["p"] == 2));
}

#[test]
fn rr_json() {
    let profile = path("data/no8.json");
    let doc = json_run("rr", &["rr", "--profile", &profile, "--i", "-1:2", "--j", "-3:0", "--json"], EXIT_OK);
    assert_eq!(doc["grid"].as_array().unwrap().len(), 16);
    validate("profile", &doc["profile"]);
    let d00 = doc["grid"].as_array().unwrap().iter().find(|c| c["i"] == 0 && c["j"] == 0).unwrap();
    assert_eq!(d00["d"], "1");
}

#[test]
fn blowup_json() {
    let germ = path("data/ce2.germ");
    let doc = json_run("blowup", &["blowup", "--germ", &germ, "--weights", "4,2,1,3", "--json"], EXIT_OK);
    assert_eq!(doc["discrepancy"], "1");
    assert_eq!(doc["e_cubed"], "1/6");
    assert_eq!(doc["charts"].as_array().unwrap().len(), 4);
}

#[test]
fn verify_json() {
    let doc = json_run("verify", &["verify", "--example", "ce2-no8", "--json"], EXIT_OK);
    assert_eq!(doc["verdict"], "pass");
    let doc = json_run("verify", &["verify", "--mutations", "20", "--seed", "3", "--json"], EXIT_OK);
    assert_eq!(doc["reports"].as_array().unwrap().len(), 10);
    assert_eq!(doc["mutations"]["total"], 20);
}

#[test]
fn dims_json() {
    let doc = json_run("dims", &["dims", "--a", "3", "--r1", "5", "--r2", "7", "--imax", "10", "--json"], EXIT_OK);
    assert_eq!(doc["holds"], true);
    let doc = json_run(
        "dims",
        &["dims", "--a", "3", "--r1", "5", "--r2", "7", "--imax", "10", "--override", "--b2", "3", "--json"],
        EXIT_FAIL,
    );
    assert_eq!(doc["holds"], false);
    assert!(doc["counterexample"].is_object());
}

#[test]
fn usage_errors() {
    assert_eq!(divcon(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(divcon(&["baskets", "--rmax", "x"]).0, EXIT_USAGE);
    assert_eq!(divcon(&["baskets", "--unknown"]).0, EXIT_USAGE);
    assert_eq!(divcon(&["verify", "--example", "no-such-example"]).0, EXIT_USAGE);
    assert_eq!(divcon(&["dims", "--a", "1", "--r1", "1", "--r2", "3"]).0, EXIT_USAGE);
    assert_eq!(divcon(&["dims", "--a", "3", "--r1", "5", "--r2", "7", "--b1", "2"]).0, EXIT_USAGE);
    assert_eq!(divcon(&["rr", "--profile", "/nonexistent.json"]).0, EXIT_USAGE);
    assert_eq!(divcon(&["blowup", "--germ", &path("data/ce2.germ"), "--weights", "4,2,0,3"]).0, EXIT_USAGE);
    assert_eq!(divcon(&["--help"]).0, EXIT_OK);
}

#[test]
fn germ_parse_errors_exit_two() {
    let dir = std::env::temp_dir().join(format!("divcon-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.txt");
    std::fs::write(&bad, "quotient 1/2(1,1,1,0);\neq x1^2 + x2^^3;\n").unwrap();
    let (code, _, err) = divcon(&["blowup", "--germ", bad.to_str().unwrap(), "--weights", "1,1,1,1"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("line 2, column"), "{err}");
    std::fs::write(&bad, "quotient 1/2(1,1,1,0); eq x1^2 + x2;\n").unwrap();
    let (code, _, err) = divcon(&["blowup", "--germ", bad.to_str().unwrap(), "--weights", "1,1,1,1"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("x2"), "{err}");
}

#[test]
fn output_is_deterministic() {
    let a = divcon(&["covers", "--rmax", "16", "--json"]).1;
    let b = divcon(&["covers", "--rmax", "16", "--json"]).1;
    assert_eq!(a, b);
}
