//! Plain, JSON and CSV rendering of command results.

use anyhow::Result;
use serde_json::{json, Value};

/// Bare scalars print as themselves; anything else as pretty JSON.
pub fn plain(result: &Value) -> String {
    match result {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        Value::Bool(b) => b.to_string(),
        other => serde_json::to_string_pretty(other).expect("serializable"),
    }
}

pub fn envelope(command: &str, params: &Value, result: &Value, exact: bool) -> String {
    let doc = json!({
        "command": command,
        "params": params,
        "result": result,
        "exact": exact,
        "version": env!("CARGO_PKG_VERSION"),
    });
    serde_json::to_string_pretty(&doc).expect("serializable")
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        Value::Number(_) | Value::Bool(_) => v.to_string(),
        other => other.to_string(),
    }
}

/// A table from a result: the `rows` array of an object, an array of
/// objects, a `values` class function as `class,value`, or a single row.
pub fn csv(result: &Value) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let rows: Vec<Value> = match result {
        Value::Object(map) if map.get("rows").is_some_and(Value::is_array) => {
            map["rows"].as_array().expect("array").clone()
        }
        Value::Object(map) if map.get("values").is_some_and(Value::is_object) => map["values"]
            .as_object()
            .expect("object")
            .iter()
            .map(|(k, v)| json!({"class": k, "value": v}))
            .collect(),
        Value::Array(items) => items
            .iter()
            .map(|v| if v.is_object() { v.clone() } else { json!({"value": v}) })
            .collect(),
        Value::Object(_) => vec![result.clone()],
        scalar => vec![json!({"value": scalar})],
    };
    let header: Vec<String> = match rows.first() {
        Some(Value::Object(first)) => first.keys().cloned().collect(),
        _ => vec!["value".to_string()],
    };
    w.write_record(&header)?;
    for row in &rows {
        w.write_record(header.iter().map(|h| cell(row.get(h).unwrap_or(&Value::Null))))?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_shapes() {
        assert_eq!(csv(&json!("4")).unwrap(), "value\n4\n");
        assert_eq!(csv(&json!([])).unwrap(), "value\n");
        assert_eq!(
            csv(&json!({"rows": [{"n": 2, "x": "1/2"}, {"n": 3, "x": "a,b"}]})).unwrap(),
            "n,x\n2,1/2\n3,\"a,b\"\n"
        );
        assert_eq!(csv(&json!({"n": 3, "values": {"[1]": "1"}})).unwrap(), "class,value\n[1],1\n");
        assert_eq!(plain(&json!("6")), "6");
    }
}
