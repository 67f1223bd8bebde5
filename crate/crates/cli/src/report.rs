use serde_json::{Map, Value};

use homlab::io::format_auto;
use homlab::Structure;

/// Ordered `key: value` report, printed as text lines or one JSON object.
#[derive(Debug, Default)]
pub struct Report {
    fields: Map<String, Value>,
    failed: bool,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn put(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.fields.insert(key.to_string(), value.into());
        self
    }

    pub fn put_structure(&mut self, key: &str, s: &Structure) -> &mut Self {
        self.put(key, inline(s))
    }

    /// Marks the report as a property failure (exit status 1).
    pub fn fail(&mut self) -> &mut Self {
        self.failed = true;
        self
    }

    pub fn failed(&self) -> bool {
        self.failed
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            return Value::Object(self.fields.clone()).to_string() + "\n";
        }
        let mut out = String::new();
        for (k, v) in &self.fields {
            match v {
                Value::Array(items) => {
                    for item in items {
                        out.push_str(&format!("{k}: {}\n", plain(item)));
                    }
                }
                other => out.push_str(&format!("{k}: {}\n", plain(other))),
            }
        }
        out
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "none".into(),
        other => other.to_string(),
    }
}

/// One-line form of a structure file: lines joined by `; `.
pub fn inline(s: &Structure) -> String {
    format_auto(s).lines().collect::<Vec<_>>().join("; ")
}
