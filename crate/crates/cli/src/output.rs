//! Rendering of task documents.

use crate::Format;
use serde_json::Value;
use std::fmt::Write;

pub fn render(docs: &[Value], format: Format) -> String {
    let mut out = String::new();
    for d in docs {
        match format {
            Format::Json => {
                out.push_str(&serde_json::to_string(d).expect("json"));
                out.push('\n');
            }
            Format::Text => {
                let _ = writeln!(out, "== {} [{}]", d["task"].as_str().unwrap_or("?"), d["status"].as_str().unwrap_or("?"));
                out.push_str(&serde_json::to_string_pretty(d).expect("json"));
                out.push('\n');
            }
            Format::Csv => out.push_str(&csv(d)),
        }
    }
    out
}

fn csv(d: &Value) -> String {
    let mut out = String::new();
    if d["task"] == "chartab" && d["result"]["characters"].is_array() {
        let classes: Vec<String> = d["result"]["classes"]
            .as_array()
            .map(|a| a.iter().map(cell).collect())
            .unwrap_or_default();
        let _ = writeln!(out, "label,degree,{}", classes.iter().map(|c| quote(c)).collect::<Vec<_>>().join(","));
        for ch in d["result"]["characters"].as_array().unwrap() {
            let vals: Vec<String> = ch["values"]
                .as_array()
                .map(|a| a.iter().map(|v| quote(&cell(v))).collect())
                .unwrap_or_default();
            let _ = writeln!(out, "{},{},{}", quote(&cell(&ch["label"])), ch["degree"], vals.join(","));
        }
        return out;
    }
    let _ = writeln!(out, "path,value");
    let mut rows = Vec::new();
    flatten(d, String::new(), &mut rows);
    for (p, v) in rows {
        let _ = writeln!(out, "{},{}", quote(&p), quote(&v));
    }
    out
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn flatten(v: &Value, path: String, out: &mut Vec<(String, String)>) {
    let join = |k: &str| if path.is_empty() { k.to_string() } else { format!("{path}.{k}") };
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                flatten(x, join(k), out);
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                flatten(x, join(&i.to_string()), out);
            }
        }
        other => out.push((path, cell(other))),
    }
}
