use serde::Serialize;
use serde_json::{json, Map, Value};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn tagged<T: Serialize>(value: T, by: &str) -> Value {
    json!({ "value": value, "by": by })
}

/// Builds the top-level document; `provenance` collects the `by` label of every tagged field.
pub fn document(query: Value, report: Value) -> Value {
    let mut provenance = Map::new();
    collect_provenance("", &report, &mut provenance);
    json!({
        "query": query,
        "report": report,
        "provenance": Value::Object(provenance),
        "version": VERSION,
    })
}

fn is_tagged(v: &Value) -> Option<&str> {
    let obj = v.as_object()?;
    if obj.len() == 2 && obj.contains_key("value") {
        obj.get("by")?.as_str()
    } else {
        None
    }
}

fn collect_provenance(prefix: &str, v: &Value, out: &mut Map<String, Value>) {
    if let Some(by) = is_tagged(v) {
        out.insert(prefix.to_string(), Value::String(by.to_string()));
        return;
    }
    match v {
        Value::Object(obj) => {
            for (k, x) in obj {
                collect_provenance(&join(prefix, k), x, out);
            }
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                collect_provenance(&join(prefix, &i.to_string()), x, out);
            }
        }
        _ => {}
    }
}

fn join(prefix: &str, key: &str) -> String {
    if prefix.is_empty() {
        key.to_string()
    } else {
        format!("{prefix}.{key}")
    }
}

fn flatten(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
    if let Some(obj) = v.as_object().filter(|_| is_tagged(v).is_some()) {
        rows.push((prefix.to_string(), scalar(&obj["value"])));
        return;
    }
    match v {
        Value::Object(obj) if !obj.is_empty() => {
            for (k, x) in obj {
                flatten(&join(prefix, k), x, rows);
            }
        }
        Value::Array(items) if !items.is_empty() => {
            for (i, x) in items.iter().enumerate() {
                flatten(&join(prefix, &i.to_string()), x, rows);
            }
        }
        other => rows.push((prefix.to_string(), scalar(other))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".to_string(),
        other => other.to_string(),
    }
}

/// Fixed-width two-column rendering of the query and report sections.
pub fn table(doc: &Value) -> String {
    let mut rows = Vec::new();
    flatten("query", &doc["query"], &mut rows);
    flatten("report", &doc["report"], &mut rows);
    let width = rows
        .iter()
        .map(|(k, _)| k.chars().count())
        .max()
        .unwrap_or(0);
    let mut out = String::new();
    for (k, v) in rows {
        out.push_str(&format!("{k:<width$}  {v}\n"));
    }
    out
}
