//! Canonical JSON: keys sorted, reals printed with exactly six decimals.
//! Numbers keep their literal text, so parsing and re-serializing output is
//! byte-identical.

use std::str::FromStr;

use serde_json::{Map, Number, Value};
use udense::{NodeSet, UncertainGraph};

pub fn real(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let text = format!("{x:.6}");
    let text = if text == "-0.000000" { "0.000000".to_string() } else { text };
    Value::Number(Number::from_str(&text).expect("formatted real is a JSON number"))
}

/// Node labels of `set`, ascending.
pub fn labels(graph: &UncertainGraph, set: &NodeSet) -> Vec<u64> {
    let mut out: Vec<u64> = set.iter().map(|v| graph.label(v)).collect();
    out.sort_unstable();
    out
}

/// Ranked sets as `[{"nodes": [...], "<key>": real}, ...]`.
pub fn ranked(graph: &UncertainGraph, sets: &[(NodeSet, f64)], key: &str) -> Value {
    Value::Array(
        sets.iter()
            .map(|(s, x)| {
                let mut entry = Map::new();
                entry.insert("nodes".into(), labels(graph, s).into());
                entry.insert(key.into(), real(*x));
                Value::Object(entry)
            })
            .collect(),
    )
}

pub fn render(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    text.push('\n');
    text
}
