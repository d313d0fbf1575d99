//! Browser bindings. Every export takes and returns plain strings; results
//! are JSON, failures are thrown as `Error` strings.

use std::sync::OnceLock;

use serde::Serialize;
use wasm_bindgen::prelude::*;

use wsmatch_core::lexicon::Lexicon;
use wsmatch_core::mapping::{evaluate, parse_data_expr_syntax, Bindings, Value};
use wsmatch_core::matcher::{data_set_relation, SetRelation};
use wsmatch_core::similarity::SimilarityEngine;
use wsmatch_core::text::{hausdorff_similarity, tokenize, SimilarityMatrix};
use wsmatch_core::wsdl::DataSet;

fn lexicon() -> &'static Lexicon {
    static LEXICON: OnceLock<Lexicon> = OnceLock::new();
    LEXICON.get_or_init(Lexicon::builtin)
}

fn lines(text: &str) -> Vec<&str> {
    text.lines().map(str::trim).filter(|l| !l.is_empty()).collect()
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("plain data serializes")
}

#[derive(Serialize)]
struct MatrixView {
    left: Vec<String>,
    right: Vec<String>,
    cells: Vec<Vec<f64>>,
    aggregate: f64,
}

/// Pairwise sentence similarity of two newline-separated lists, plus the
/// Hausdorff aggregate.
#[wasm_bindgen(js_name = sentenceMatrix)]
pub fn sentence_matrix(left: &str, right: &str) -> Result<String, String> {
    let engine = SimilarityEngine::new(lexicon());
    let a: Vec<_> = lines(left).into_iter().map(tokenize).collect();
    let b: Vec<_> = lines(right).into_iter().map(tokenize).collect();
    let m = SimilarityMatrix::from_fn(a.len(), b.len(), |i, j| engine.text().sentence_similarity(&a[i], &b[j]));
    let aggregate = hausdorff_similarity(&m).map_err(|e| e.to_string())?;
    Ok(to_json(&MatrixView {
        left: a.iter().map(|s| s.text()).collect(),
        right: b.iter().map(|s| s.text()).collect(),
        cells: m.to_rows(),
        aggregate,
    }))
}

#[derive(Serialize)]
struct RelationView {
    relation: SetRelation,
    reading: &'static str,
}

/// Relation between two newline-separated data sets at `threshold`.
#[wasm_bindgen(js_name = setRelation)]
pub fn set_relation(left: &str, right: &str, threshold: f64) -> Result<String, String> {
    if !(0.0..=1.0).contains(&threshold) {
        return Err(format!("threshold {threshold} is outside [0, 1]"));
    }
    let a = DataSet::from_sentences("left", lines(left));
    let b = DataSet::from_sentences("right", lines(right));
    if a.is_empty() || b.is_empty() {
        return Err("both sets need at least one line".into());
    }
    let engine = SimilarityEngine::new(lexicon());
    let relation = data_set_relation(&engine, &a, &b, threshold);
    let reading = match relation {
        SetRelation::Equal => "every element on each side has a match on the other",
        SetRelation::LeftSubsetOfRight => "left is covered by right",
        SetRelation::RightSubsetOfLeft => "right is covered by left",
        SetRelation::Intersect => "some elements match",
        SetRelation::Disjoint => "no element matches",
    };
    Ok(to_json(&RelationView { relation, reading }))
}

/// Evaluates a data expression. `bindings` is a JSON object mapping leaf
/// keys (or `operation: key`) to numbers or strings.
#[wasm_bindgen(js_name = evaluateExpression)]
pub fn evaluate_expression(expr: &str, bindings: &str) -> Result<String, String> {
    let parsed = parse_data_expr_syntax(expr).map_err(|e| e.to_string())?;
    let bindings: Bindings = if bindings.trim().is_empty() {
        Bindings::new()
    } else {
        serde_json::from_str(bindings).map_err(|e| format!("bindings: {e}"))?
    };
    let value: Value = evaluate(&parsed, &bindings).map_err(|e| e.to_string())?;
    Ok(to_json(&serde_json::json!({ "value": value, "display": value.to_string(), "canonical": parsed.to_string() })))
}
