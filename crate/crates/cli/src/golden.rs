use std::fmt;
use std::path::Path;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::CliError;

/// One differing leaf, addressed like `entries[3].dim`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiffEntry {
    pub path: String,
    pub expected: Option<Value>,
    pub actual: Option<Value>,
}

impl fmt::Display for DiffEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: &Option<Value>| v.as_ref().map_or("<missing>".to_string(), Value::to_string);
        write!(
            f,
            "{}: expected {}, got {}",
            self.path,
            show(&self.expected),
            show(&self.actual)
        )
    }
}

/// Object keys sorted at every level.
pub fn canonicalize(v: &Value) -> Value {
    match v {
        Value::Object(m) => {
            let mut keys: Vec<&String> = m.keys().collect();
            keys.sort();
            let mut out = Map::new();
            for k in keys {
                out.insert(k.clone(), canonicalize(&m[k]));
            }
            Value::Object(out)
        }
        Value::Array(a) => Value::Array(a.iter().map(canonicalize).collect()),
        _ => v.clone(),
    }
}

/// Compact canonical text, one trailing newline.
pub fn canonical_text(v: &Value) -> String {
    let mut s = serde_json::to_string(&canonicalize(v)).expect("json serializes");
    s.push('\n');
    s
}

pub fn diff(expected: &Value, actual: &Value) -> Vec<DiffEntry> {
    let mut out = Vec::new();
    walk("", expected, actual, &mut out);
    out
}

fn child(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

fn walk(path: &str, a: &Value, b: &Value, out: &mut Vec<DiffEntry>) {
    match (a, b) {
        (Value::Object(x), Value::Object(y)) => {
            let mut keys: Vec<&String> = x.keys().chain(y.keys()).collect();
            keys.sort();
            keys.dedup();
            for k in keys {
                let p = child(path, k);
                match (x.get(k), y.get(k)) {
                    (Some(u), Some(v)) => walk(&p, u, v, out),
                    (u, v) => out.push(DiffEntry {
                        path: p,
                        expected: u.cloned(),
                        actual: v.cloned(),
                    }),
                }
            }
        }
        (Value::Array(x), Value::Array(y)) => {
            for i in 0..x.len().max(y.len()) {
                let p = format!("{path}[{i}]");
                match (x.get(i), y.get(i)) {
                    (Some(u), Some(v)) => walk(&p, u, v, out),
                    (u, v) => out.push(DiffEntry {
                        path: p,
                        expected: u.cloned(),
                        actual: v.cloned(),
                    }),
                }
            }
        }
        _ if a == b => {}
        _ => out.push(DiffEntry {
            path: if path.is_empty() { "$".into() } else { path.to_string() },
            expected: Some(a.clone()),
            actual: Some(b.clone()),
        }),
    }
}

/// Compares a report with a golden file. Equal canonical bytes mean an empty
/// diff; otherwise every differing path is listed.
pub fn golden_compare(report: &Value, golden: &Path) -> Result<Vec<DiffEntry>, CliError> {
    let text =
        std::fs::read_to_string(golden).map_err(|e| CliError::Config(format!("golden {}: {e}", golden.display())))?;
    let want: Value =
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("golden {}: {e}", golden.display())))?;
    if canonical_text(&want) == canonical_text(report) {
        return Ok(Vec::new());
    }
    let d = diff(&want, report);
    debug_assert!(!d.is_empty());
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn key_order_is_irrelevant() {
        let a = json!({"b": 1, "a": [1, {"y": 2, "x": 3}]});
        let b = json!({"a": [1, {"x": 3, "y": 2}], "b": 1});
        assert_eq!(canonical_text(&a), canonical_text(&b));
        assert!(diff(&a, &b).is_empty());
    }

    #[test]
    fn paths_name_the_leaf() {
        let a = json!({"entries": [{"dim": 1}, {"dim": 0}]});
        let b = json!({"entries": [{"dim": 1}, {"dim": 2}], "extra": true});
        let d = diff(&a, &b);
        assert_eq!(d.len(), 2);
        assert_eq!(d[0].path, "entries[1].dim");
        assert_eq!(d[1].path, "extra");
        assert_eq!(d[1].expected, None);
    }
}
