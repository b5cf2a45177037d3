//! Rendering of command reports as text tables, CSV or JSON.

use serde::Serialize;
use serde_json::{Map, Value};

pub const SCHEMA: &str = "isogeo/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// Rows of one command; each row carries an `ok` flag.
pub struct Report {
    pub command: &'static str,
    pub config: Value,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Map<String, Value>>,
}

impl Report {
    pub fn new(command: &'static str, config: Value, columns: &[&'static str]) -> Self {
        Report { command, config, columns: columns.to_vec(), rows: Vec::new() }
    }

    /// Appends a serializable row with its verdict.
    pub fn push<T: Serialize>(&mut self, row: &T, ok: bool) {
        let mut m = match serde_json::to_value(row).expect("rows serialize") {
            Value::Object(m) => m,
            other => {
                let mut m = Map::new();
                m.insert("value".into(), other);
                m
            }
        };
        m.insert("ok".into(), Value::Bool(ok));
        self.rows.push(m);
    }

    pub fn ok(&self) -> bool {
        self.rows.iter().all(|r| r.get("ok") == Some(&Value::Bool(true)))
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.json(),
            Format::Csv => self.csv(),
            Format::Text => self.text(),
        }
    }

    fn json(&self) -> String {
        // serde_json maps are ordered by key, so the output is canonical
        let v = serde_json::json!({
            "schema": SCHEMA,
            "command": self.command,
            "config": self.config,
            "rows": self.rows,
            "ok": self.ok(),
        });
        let mut s = serde_json::to_string_pretty(&v).expect("json");
        s.push('\n');
        s
    }

    fn cells(&self) -> Vec<Vec<String>> {
        self.rows.iter().map(|r| self.columns.iter().map(|c| cell(r.get(*c))).collect()).collect()
    }

    fn csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in self.cells() {
            let quoted: Vec<String> = row.into_iter().map(|c| if c.contains([',', '"']) { format!("\"{}\"", c.replace('"', "\"\"")) } else { c }).collect();
            out.push_str(&quoted.join(","));
            out.push('\n');
        }
        out
    }

    fn text(&self) -> String {
        let cells = self.cells();
        let widths: Vec<usize> = self
            .columns
            .iter()
            .enumerate()
            .map(|(k, c)| cells.iter().map(|r| r[k].chars().count()).max().unwrap_or(0).max(c.len()))
            .collect();
        let line = |vals: Vec<String>| -> String {
            let padded: Vec<String> = vals.iter().zip(&widths).map(|(v, w)| format!("{v:<w$}")).collect();
            padded.join("  ").trim_end().to_string() + "\n"
        };
        let mut out = line(self.columns.iter().map(|c| c.to_string()).collect());
        for row in cells {
            out.push_str(&line(row));
        }
        let failed = self.rows.iter().filter(|r| r.get("ok") != Some(&Value::Bool(true))).count();
        if failed == 0 {
            out.push_str(&format!("{}: all {} rows ok\n", self.command, self.rows.len()));
        } else {
            out.push_str(&format!("{}: {failed} of {} rows FAILED\n", self.command, self.rows.len()));
        }
        out
    }
}

fn cell(v: Option<&Value>) -> String {
    match v {
        None | Some(Value::Null) => "-".into(),
        Some(Value::String(s)) => s.clone(),
        Some(Value::Array(a)) => a.iter().map(|x| cell(Some(x))).collect::<Vec<_>>().join(";"),
        Some(Value::Object(o)) => o.iter().map(|(k, x)| format!("{k}={}", cell(Some(x)))).collect::<Vec<_>>().join(";"),
        Some(other) => other.to_string(),
    }
}
