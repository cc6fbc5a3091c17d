use rsboole_core::{Error, Result};
use serde::Serialize;
use serde_json::Value;

use crate::Format;

pub fn render<T: Serialize>(report: &T, format: Format) -> Result<String> {
    match format {
        Format::Json => {
            let mut s =
                serde_json::to_string_pretty(report).map_err(|e| Error::Parse(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => Ok(csv(&to_value(report)?)),
        Format::Table => Ok(table(&to_value(report)?)),
    }
}

fn to_value<T: Serialize>(report: &T) -> Result<Value> {
    serde_json::to_value(report).map_err(|e| Error::Parse(e.to_string()))
}

fn row_array(v: &Value) -> Option<&Vec<Value>> {
    match v {
        Value::Array(items) if !items.is_empty() && items.iter().all(Value::is_object) => {
            Some(items)
        }
        _ => None,
    }
}

/// Reports with a row-shaped field become a plain table of those rows;
/// everything else collapses to key,value pairs.
fn csv(v: &Value) -> String {
    if let Value::Object(map) = v {
        for key in ["rows", "checks"] {
            if let Some(rows) = map.get(key).and_then(row_array) {
                return rows_csv(rows);
            }
        }
        let mut out = String::from("key,value\n");
        for (k, val) in map {
            out.push_str(&format!("{},{}\n", escape(k), cell(val)));
        }
        return out;
    }
    format!("{v}\n")
}

fn rows_csv(rows: &[Value]) -> String {
    let Value::Object(first) = &rows[0] else {
        return String::new();
    };
    let headers: Vec<&String> = first.keys().collect();
    let mut out = headers
        .iter()
        .map(|h| escape(h))
        .collect::<Vec<_>>()
        .join(",");
    out.push('\n');
    for row in rows {
        let Value::Object(obj) = row else { continue };
        let line: Vec<String> = headers
            .iter()
            .map(|h| obj.get(*h).map(cell).unwrap_or_default())
            .collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => escape(s),
        Value::Bool(_) | Value::Number(_) => v.to_string(),
        nested => escape(&nested.to_string()),
    }
}

fn escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn table(v: &Value) -> String {
    let Value::Object(map) = v else {
        return format!("{v}\n");
    };
    let mut out = String::new();
    let mut blocks: Vec<(&String, String)> = vec![];
    for (k, val) in map {
        match row_array(val) {
            Some(rows) => blocks.push((k, aligned(rows))),
            None => out.push_str(&format!("{k}: {}\n", plain(val))),
        }
    }
    for (name, text) in blocks {
        out.push_str(&format!("\n{name}:\n{text}"));
    }
    out
}

fn plain(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn aligned(rows: &[Value]) -> String {
    let Value::Object(first) = &rows[0] else {
        return String::new();
    };
    let headers: Vec<String> = first.keys().cloned().collect();
    let mut grid: Vec<Vec<String>> = vec![headers.clone()];
    for row in rows {
        let Value::Object(obj) = row else { continue };
        grid.push(
            headers
                .iter()
                .map(|h| obj.get(h).map(plain).unwrap_or_else(|| "-".into()))
                .collect(),
        );
    }
    let mut widths = vec![0usize; headers.len()];
    for row in &grid {
        for (c, s) in row.iter().enumerate() {
            widths[c] = widths[c].max(s.len());
        }
    }
    let mut out = String::new();
    for row in &grid {
        let line: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(c, s)| format!("{s:<w$}", w = widths[c]))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}
