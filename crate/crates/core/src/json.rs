use serde::Serialize;
use serde_json::{Map, Value};

/// Canonical JSON text: object keys sorted, two-space indentation, `\n`
/// line endings and a trailing newline.
pub fn canonical_json<T: Serialize + ?Sized>(value: &T) -> String {
    let value = sort_keys(serde_json::to_value(value).expect("serializable value"));
    let mut out = serde_json::to_string_pretty(&value).expect("serializable value");
    out.push('\n');
    out
}

fn sort_keys(value: Value) -> Value {
    match value {
        Value::Object(map) => {
            let mut entries: Vec<(String, Value)> = map.into_iter().collect();
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            Value::Object(
                entries
                    .into_iter()
                    .map(|(k, v)| (k, sort_keys(v)))
                    .collect::<Map<_, _>>(),
            )
        }
        Value::Array(items) => Value::Array(items.into_iter().map(sort_keys).collect()),
        other => other,
    }
}
