//! Point-set JSON and reproducible JSON output.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{invalid, Error, Result};
use crate::scalar::Scalar;
use crate::space::{PointSet, Space};

/// On-disk form `{"space": "...", "points": [[...], ...]}`; other keys are ignored.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PointSetFile {
    pub space: Space,
    pub points: Vec<Vec<f64>>,
}

impl<T: Scalar> From<&PointSet<T>> for PointSetFile {
    fn from(ps: &PointSet<T>) -> Self {
        PointSetFile {
            space: ps.space().clone(),
            points: ps.points().iter().map(|x| x.iter().map(|c| c.as_f64()).collect()).collect(),
        }
    }
}

impl PointSetFile {
    pub fn into_point_set<T: Scalar>(self) -> Result<PointSet<T>> {
        let points = self.points.into_iter().map(|x| x.into_iter().map(T::lit).collect()).collect();
        PointSet::new(self.space, points)
    }
}

pub fn parse_point_set<T: Scalar>(text: &str) -> Result<PointSet<T>> {
    let file: PointSetFile = serde_json::from_str(text).map_err(|e| Error::Parse(format!("point set: {e}")))?;
    file.into_point_set()
}

pub fn read_point_set<T: Scalar>(path: &Path) -> Result<PointSet<T>> {
    let text = std::fs::read_to_string(path).map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
    parse_point_set(&text)
}

/// Serializes `value` and prints it with [`to_json_string`].
pub fn to_json<S: Serialize>(value: &S) -> Result<String> {
    let v = serde_json::to_value(value).map_err(|e| Error::Parse(e.to_string()))?;
    Ok(to_json_string(&v))
}

/// Indented JSON in which every non-integer number carries 17 significant
/// digits, so that printed values read back bit-for-bit.
pub fn to_json_string(v: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, v, 0);
    out
}

fn format_number(n: &serde_json::Number) -> String {
    if n.is_f64() {
        let x = n.as_f64().expect("f64 number");
        format!("{x:.16e}")
    } else {
        n.to_string()
    }
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => out.push_str(&format_number(n)),
        Value::String(s) => out.push_str(&serde_json::to_string(s).expect("string serializes")),
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) if items.iter().all(is_scalar) => {
            out.push('[');
            for (k, item) in items.iter().enumerate() {
                if k > 0 {
                    out.push_str(", ");
                }
                write_value(out, item, indent);
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (k, item) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(out, item, indent + 1);
                out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (k, (key, item)) in map.iter().enumerate() {
                let _ = write!(out, "{}{}: ", pad(indent + 1), serde_json::to_string(key).expect("key serializes"));
                write_value(out, item, indent + 1);
                out.push_str(if k + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
    }
}
