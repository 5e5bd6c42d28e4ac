use std::fs;
use std::path::Path;

use gradedgeom::{run_source, Options};
use serde_json::{json, Value};

fn validator() -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/result.schema.json");
    let schema: Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&schema).expect("schema compiles")
}

fn assert_valid(v: &jsonschema::Validator, doc: &Value, what: &str) {
    let errors: Vec<String> = v
        .iter_errors(doc)
        .map(|e| format!("{} at {}", e, e.instance_path()))
        .collect();
    assert!(errors.is_empty(), "{what}: {errors:#?}");
}

#[test]
fn golden_json_is_schema_valid() {
    let v = validator();
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let mut n = 0;
    for entry in fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "gg") {
            let src = fs::read_to_string(&path).unwrap();
            let report = run_source(&src, &Options::default()).unwrap();
            assert_valid(&v, &report.json(), &path.display().to_string());
            n += 1;
        }
    }
    assert!(n >= 4);
}

#[test]
fn every_kind_appears_in_goldens() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let mut kinds = std::collections::BTreeSet::new();
    for entry in fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "json") {
            let doc: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
            for r in doc.as_array().unwrap() {
                if let Some(k) = r.pointer("/result/kind").and_then(Value::as_str) {
                    kinds.insert(k.to_string());
                }
            }
        }
    }
    for k in [
        "degree",
        "poly",
        "laurent",
        "bool",
        "weights",
        "ranks",
        "section",
        "section_family",
        "operator",
        "operator_family",
        "rees",
        "classes",
        "clifford",
        "exterior",
        "exterior_operator",
        "jet",
    ] {
        assert!(kinds.contains(k), "no golden produces kind {k}");
    }
}

#[test]
fn schema_rejects_malformed_records() {
    let v = validator();
    let bad = [
        json!([{ "command": "deg", "inputs": [], "result": { "kind": "bool", "value": 3 } }]),
        json!([{ "command": "deg", "inputs": [], "result": { "kind": "degree", "value": 1.5 } }]),
        json!([{ "command": "deg", "inputs": [], "result": { "kind": "poly",
            "value": { "vars": [], "monomials": [{ "coeff": { "num": "1", "den": "0" }, "exps": [] }] } } }]),
        json!([{ "command": "deg", "inputs": [] }]),
        json!([{ "command": "deg", "inputs": [], "result": { "kind": "matrix", "value": [] } }]),
        json!([{ "command": "deg", "inputs": [], "error": { "message": "m", "line": 0, "column": 1, "length": 1 } }]),
    ];
    for doc in &bad {
        assert!(!v.is_valid(doc), "accepted {doc}");
    }
}
