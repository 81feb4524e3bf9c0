//! Analysis reports and their text and JSON renderings.
//!
//! Entries keep insertion order in text output. JSON output sorts every
//! object by key, so equal reports always serialize to the same bytes.

use std::fmt::Write as _;

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};
use simplexity_core::{Mixture, Point, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum OutputFormat {
    #[default]
    Text,
    Structured,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

impl InputDigest {
    pub fn of(path: &str, bytes: &[u8]) -> Self {
        InputDigest {
            path: path.to_string(),
            sha256: format!("{:x}", Sha256::digest(bytes)),
        }
    }
}

/// Outcome of re-checking a report's certificates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verification {
    pub checks: Vec<(String, bool)>,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    pub command: String,
    pub inputs: Vec<InputDigest>,
    pub summary: String,
    pub verdicts: Vec<(String, Value)>,
    pub values: Vec<(String, Value)>,
    pub certificates: Vec<(String, Value)>,
    pub verification: Option<Verification>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            ..Report::default()
        }
    }

    pub fn input(&mut self, d: InputDigest) -> &mut Self {
        self.inputs.push(d);
        self
    }

    pub fn summary(&mut self, s: impl Into<String>) -> &mut Self {
        self.summary = s.into();
        self
    }

    pub fn verdict(&mut self, k: &str, v: impl Into<Value>) -> &mut Self {
        self.verdicts.push((k.to_string(), v.into()));
        self
    }

    pub fn value(&mut self, k: &str, v: impl Into<Value>) -> &mut Self {
        self.values.push((k.to_string(), v.into()));
        self
    }

    pub fn certificate(&mut self, k: &str, v: impl Into<Value>) -> &mut Self {
        self.certificates.push((k.to_string(), v.into()));
        self
    }

    pub fn to_json(&self) -> Value {
        let section = |entries: &[(String, Value)]| {
            Value::Object(entries.iter().cloned().collect::<Map<String, Value>>())
        };
        let mut out = json!({
            "command": self.command,
            "inputs": self.inputs.iter().map(|d| json!({"path": d.path, "sha256": d.sha256})).collect::<Vec<_>>(),
            "summary": self.summary,
            "verdicts": section(&self.verdicts),
            "values": section(&self.values),
            "certificates": section(&self.certificates),
        });
        if let Some(v) = &self.verification {
            out["verify"] = json!({
                "result": if v.passed() { "pass" } else { "fail" },
                "checks": v.checks.iter().map(|(k, ok)| json!({"check": k, "pass": ok})).collect::<Vec<_>>(),
            });
        }
        out
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Structured => {
                let mut s = serde_json::to_string_pretty(&self.to_json()).expect("json serializes");
                s.push('\n');
                s
            }
            OutputFormat::Text => self.render_text(),
        }
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "command: {}", self.command).unwrap();
        for d in &self.inputs {
            writeln!(out, "input: {} sha256={}", d.path, d.sha256).unwrap();
        }
        writeln!(out, "result: {}", self.summary).unwrap();
        for (title, entries) in [
            ("verdicts", &self.verdicts),
            ("values", &self.values),
            ("certificates", &self.certificates),
        ] {
            if entries.is_empty() {
                continue;
            }
            writeln!(out, "{title}:").unwrap();
            for (k, v) in entries {
                text_entry(&mut out, 1, k, v);
            }
        }
        if let Some(v) = &self.verification {
            for (k, ok) in &v.checks {
                writeln!(out, "check {}: {}", k, if *ok { "pass" } else { "fail" }).unwrap();
            }
            writeln!(out, "verify: {}", if v.passed() { "pass" } else { "fail" }).unwrap();
        }
        out
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Null => Some("none".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::Array(a) if a.iter().all(|x| !x.is_array() && !x.is_object()) => {
            Some(format!("[{}]", a.iter().filter_map(scalar).collect::<Vec<_>>().join(", ")))
        }
        Value::Object(m) if m.len() <= 8 && m.values().all(|x| !x.is_array() && !x.is_object()) => {
            let parts: Vec<String> = m.iter().filter_map(|(k, x)| Some(format!("{k}: {}", scalar(x)?))).collect();
            Some(format!("{{{}}}", parts.join(", ")))
        }
        _ => None,
    }
}

fn text_entry(out: &mut String, depth: usize, key: &str, v: &Value) {
    let pad = "  ".repeat(depth);
    if let Some(s) = scalar(v) {
        writeln!(out, "{pad}{key}: {s}").unwrap();
        return;
    }
    writeln!(out, "{pad}{key}:").unwrap();
    match v {
        Value::Array(items) => {
            for item in items {
                match scalar(item) {
                    Some(s) => writeln!(out, "{pad}  - {s}").unwrap(),
                    None => {
                        writeln!(out, "{pad}  -").unwrap();
                        if let Value::Object(m) = item {
                            for (k, x) in m {
                                text_entry(out, depth + 2, k, x);
                            }
                        } else {
                            text_entry(out, depth + 2, "item", item);
                        }
                    }
                }
            }
        }
        Value::Object(m) => {
            for (k, x) in m {
                text_entry(out, depth + 1, k, x);
            }
        }
        _ => unreachable!("scalars handled above"),
    }
}

pub fn rat(r: &Rational) -> Value {
    Value::String(r.to_string())
}

pub fn rats(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rat).collect())
}

pub fn point(p: &Point) -> Value {
    Value::String(p.to_string())
}

pub fn mixture(m: &Mixture) -> Value {
    Value::Object(m.iter().map(|(k, w)| (k.clone(), rat(w))).collect())
}
