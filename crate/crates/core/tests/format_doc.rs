//! The examples in docs/model-format.md must be real documents.

use ramnet_core::{load_model, save_model};
use serde_json::Value;

const DOC: &str = include_str!("../../../docs/model-format.md");

fn documents() -> Vec<Value> {
    let mut docs = Vec::new();
    for block in DOC.split("```json").skip(1) {
        let body = block.split("```").next().unwrap();
        let values: Vec<Value> = match serde_json::from_str(body) {
            Ok(v) => vec![v],
            Err(_) => body
                .lines()
                .filter(|l| !l.trim().is_empty())
                .map(|l| serde_json::from_str(l).unwrap())
                .collect(),
        };
        docs.extend(
            values
                .into_iter()
                .filter(|v| v.get("formatVersion").is_some()),
        );
    }
    docs
}

#[test]
fn documented_examples_load_and_resave_identically() {
    let docs = documents();
    assert_eq!(docs.len(), 6);
    for doc in docs {
        let compact = serde_json::to_string(&doc).unwrap();
        let model = load_model(&compact).unwrap_or_else(|e| panic!("{e}: {compact}"));
        assert_eq!(save_model(&model), compact);
    }
}
