use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::{Map, Value};

use crate::args::Format;

pub const SCHEMA: u64 = 1;

/// Flat key-value report, always carrying `schema` and `command`; keys serialise sorted.
pub struct Report {
    fields: Map<String, Value>,
}

impl Report {
    pub fn new(command: &str, deterministic: bool) -> Self {
        let mut fields = Map::new();
        fields.insert("schema".into(), SCHEMA.into());
        fields.insert("command".into(), command.into());
        if !deterministic {
            let secs = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
            fields.insert("timestamp".into(), secs.into());
        }
        Self { fields }
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.fields.insert(key.into(), value.into());
        self
    }

    pub fn extend(&mut self, obj: Value) -> &mut Self {
        if let Value::Object(map) = obj {
            self.fields.extend(map);
        }
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.fields).expect("report serialises");
                s.push('\n');
                s
            }
            Format::Text => self
                .fields
                .iter()
                .map(|(k, v)| format!("{k}: {}\n", plain(v)))
                .collect(),
            Format::Csv => {
                let header: Vec<&str> = self.fields.keys().map(String::as_str).collect();
                let row: Vec<String> = self.fields.values().map(|v| csv_cell(&plain(v))).collect();
                format!("{}\n{}\n", header.join(","), row.join(","))
            }
        }
    }
}

/// Scalars bare, arrays space-separated, objects as compact JSON.
fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        Value::Array(items) => items.iter().map(plain).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}

fn csv_cell(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}
