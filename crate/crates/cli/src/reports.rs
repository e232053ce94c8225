//! Report output helpers.

use std::path::Path;

use anyhow::{Context, Result};
use clap::ValueEnum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Writes to the given path, or stdout when none.
pub fn emit(content: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, content).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            print!("{}", content);
            Ok(())
        }
    }
}

/// Flat `key,value` projection of a JSON report, for the non-sweep commands.
pub fn flatten_json_to_csv(value: &serde_json::Value) -> String {
    let mut rows = Vec::new();
    flatten(value, String::new(), &mut rows);
    let mut out = String::from("key,value\n");
    for (k, v) in rows {
        out.push_str(&k);
        out.push(',');
        out.push_str(&v);
        out.push('\n');
    }
    out
}

fn flatten(value: &serde_json::Value, prefix: String, rows: &mut Vec<(String, String)>) {
    match value {
        serde_json::Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{}.{}", prefix, k)
                };
                flatten(v, key, rows);
            }
        }
        serde_json::Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(v, format!("{}[{}]", prefix, i), rows);
            }
        }
        other => rows.push((prefix, other.to_string())),
    }
}
