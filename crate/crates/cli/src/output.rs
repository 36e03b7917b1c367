//! Human-readable rendering derived from the JSON form, so both carry the
//! same fields.

use serde_json::Value;

/// One `key=value` line; nested objects use dotted keys, arrays are
/// comma-joined and `null` prints as `-`.
pub fn human_line(value: &Value) -> String {
    let mut parts = Vec::new();
    flatten("", value, &mut parts);
    parts.join(" ")
}

fn flatten(prefix: &str, value: &Value, out: &mut Vec<String>) {
    match value {
        Value::Object(map) => {
            for (key, v) in map {
                let key = if prefix.is_empty() { key.clone() } else { format!("{prefix}.{key}") };
                flatten(&key, v, out);
            }
        }
        Value::Array(items) if items.iter().any(|v| v.is_object()) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), v, out);
            }
        }
        other => out.push(format!("{prefix}={}", scalar(other))),
    }
}

fn scalar(value: &Value) -> String {
    match value {
        Value::Null => "-".into(),
        Value::String(s) => s.clone(),
        Value::Array(items) if items.is_empty() => "[]".into(),
        Value::Array(items) => items.iter().map(scalar).collect::<Vec<_>>().join(","),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn flattens_nested_values() {
        let v = json!({
            "n": 11, "balanced": false,
            "witness": {"x": "u0", "y": "u1"},
            "sets": ["u0", "v3"], "empty": [], "none": null,
            "reports": [{"a": 1}, {"a": 2}]
        });
        assert_eq!(
            human_line(&v),
            "n=11 balanced=false witness.x=u0 witness.y=u1 sets=u0,v3 empty=[] none=- reports[0].a=1 reports[1].a=2"
        );
    }
}
