//! Rendering of command results in the requested format.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde_json::{json, Value};
use toda_core::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Dot,
    Text,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "dot" => Ok(Format::Dot),
            "text" => Ok(Format::Text),
            _ => Err(format!("unknown format {s:?} (json, csv, dot, text)")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Dot => "dot",
            Format::Text => "text",
        })
    }
}

/// One result, renderable as JSON and text, and as CSV or DOT where those make sense.
#[derive(Debug, Clone)]
pub struct Output {
    pub command: &'static str,
    pub json: Value,
    pub text: String,
    pub csv: Option<String>,
    pub dot: Option<String>,
}

impl Output {
    pub fn new(command: &'static str, json: Value, text: String) -> Self {
        Output { command, json, text, csv: None, dot: None }
    }

    pub fn with_csv(mut self, csv: String) -> Self {
        self.csv = Some(csv);
        self
    }

    pub fn with_dot(mut self, dot: String) -> Self {
        self.dot = Some(dot);
        self
    }

    pub fn render(&self, format: Format) -> Result<String> {
        let unsupported = || {
            let mut have = vec!["json", "text"];
            if self.csv.is_some() {
                have.push("csv");
            }
            if self.dot.is_some() {
                have.push("dot");
            }
            Error::InvalidArgument(format!("{} does not produce {format} output (available: {})", self.command, have.join(", ")))
        };
        match format {
            Format::Json => {
                let mut doc = match &self.json {
                    Value::Object(m) => m.clone(),
                    other => {
                        let mut m = serde_json::Map::new();
                        m.insert("result".into(), other.clone());
                        m
                    }
                };
                doc.insert("schema_version".into(), json!(SCHEMA_VERSION));
                doc.insert("command".into(), json!(self.command));
                let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("JSON values serialize");
                s.push('\n');
                Ok(s)
            }
            Format::Text => Ok(ensure_newline(self.text.clone())),
            Format::Csv => self.csv.clone().map(ensure_newline).ok_or_else(unsupported),
            Format::Dot => self.dot.clone().ok_or_else(unsupported),
        }
    }
}

fn ensure_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

pub fn emit(rendered: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, rendered).map_err(|source| Error::Io { path: path.to_path_buf(), source }),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            // A closed pipe (`| head`) is not worth an error.
            let _ = stdout.write_all(rendered.as_bytes());
            Ok(())
        }
    }
}

/// RFC 4180 quoting, only where needed.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.iter().map(|f| csv_field(f)).collect::<Vec<_>>().join(","));
        out.push('\n');
    }
    out
}
