//! Canonical JSON serialization and digests for reproducible reports.
//!
//! Object keys are emitted in sorted order with no insignificant
//! whitespace, so equal values always produce byte-identical strings and
//! digests. Timing fields are stripped before hashing so reruns of the same
//! computation agree.

use crate::Result;
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Serializes a value to canonical JSON: sorted keys, compact separators.
pub fn to_canonical_string<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value)?;
    Ok(canonical_value_string(&v))
}

fn canonical_value_string(v: &Value) -> String {
    match v {
        Value::Object(map) => {
            let mut entries: Vec<(&String, &Value)> = map.iter().collect();
            entries.sort_by_key(|(k, _)| k.as_str());
            let body: Vec<String> = entries
                .into_iter()
                .map(|(k, v)| {
                    format!(
                        "{}:{}",
                        serde_json::to_string(k).expect("string key"),
                        canonical_value_string(v)
                    )
                })
                .collect();
            format!("{{{}}}", body.join(","))
        }
        Value::Array(items) => {
            let body: Vec<String> = items.iter().map(canonical_value_string).collect();
            format!("[{}]", body.join(","))
        }
        other => serde_json::to_string(other).expect("scalar"),
    }
}

/// Removes volatile fields (currently `wall_time_ms`) at any depth.
pub fn strip_volatile(v: &Value) -> Value {
    match v {
        Value::Object(map) => Value::Object(
            map.iter()
                .filter(|(k, _)| k.as_str() != "wall_time_ms")
                .map(|(k, v)| (k.clone(), strip_volatile(v)))
                .collect(),
        ),
        Value::Array(items) => Value::Array(items.iter().map(strip_volatile).collect()),
        other => other.clone(),
    }
}

/// SHA-256 of the canonical JSON with volatile fields removed, hex encoded.
pub fn result_digest<T: Serialize>(value: &T) -> Result<String> {
    let v = strip_volatile(&serde_json::to_value(value)?);
    let canonical = canonical_value_string(&v);
    let mut hasher = Sha256::new();
    hasher.update(canonical.as_bytes());
    Ok(format!("{:x}", hasher.finalize()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn keys_are_sorted_and_compact() {
        let v = json!({"b": 1, "a": [2, {"z": 3, "y": null}]});
        assert_eq!(
            to_canonical_string(&v).unwrap(),
            r#"{"a":[2,{"y":null,"z":3}],"b":1}"#
        );
    }

    #[test]
    fn digest_ignores_wall_time() {
        let a = json!({"count": 56, "wall_time_ms": 12, "inner": {"wall_time_ms": 99}});
        let b = json!({"count": 56, "wall_time_ms": 7000, "inner": {}});
        assert_eq!(result_digest(&a).unwrap(), result_digest(&b).unwrap());
        let c = json!({"count": 57});
        assert_ne!(result_digest(&a).unwrap(), result_digest(&c).unwrap());
    }

    #[test]
    fn digest_is_stable_across_key_order() {
        let a = json!({"x": 1, "y": 2});
        let b = json!({"y": 2, "x": 1});
        assert_eq!(result_digest(&a).unwrap(), result_digest(&b).unwrap());
    }
}
