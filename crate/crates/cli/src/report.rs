//! Reports rendered as JSON, CSV or plain text.

use std::fmt::Write as _;

use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
    Text,
}

/// Named scalar fields plus an optional table of rows.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    fields: Map<String, Value>,
    columns: Vec<String>,
    rows: Vec<Vec<Value>>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn field(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.fields.insert(key.to_string(), value.into());
        self
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.fields.insert(key.to_string(), value.into());
    }

    pub fn columns(mut self, columns: &[&str]) -> Self {
        self.columns = columns.iter().map(|c| c.to_string()).collect();
        self
    }

    pub fn push_row(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.fields.get(key)
    }

    pub fn to_json(&self) -> Value {
        let mut out = self.fields.clone();
        if !self.columns.is_empty() {
            let rows = self
                .rows
                .iter()
                .map(|r| Value::Object(self.columns.iter().cloned().zip(r.iter().cloned()).collect()))
                .collect();
            out.insert("rows".into(), Value::Array(rows));
        }
        Value::Object(out)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => rigan_core::json::to_canonical_string(&self.to_json()),
            Format::Csv => self.render_csv(),
            Format::Text => self.render_text(),
        }
    }

    fn render_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
        if self.columns.is_empty() {
            w.write_record(["key", "value"]).expect("in-memory write");
            for (k, v) in &self.fields {
                w.write_record([k.as_str(), &cell(v)]).expect("in-memory write");
            }
        } else {
            for (k, v) in &self.fields {
                w.write_record(["#", k.as_str(), &cell(v)]).expect("in-memory write");
            }
            w.write_record(&self.columns).expect("in-memory write");
            for row in &self.rows {
                w.write_record(row.iter().map(cell)).expect("in-memory write");
            }
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
    }

    fn render_text(&self) -> String {
        let mut s = String::new();
        let width = self.fields.keys().map(String::len).max().unwrap_or(0);
        for (k, v) in &self.fields {
            let _ = writeln!(s, "{k:width$}  {}", cell(v));
        }
        if !self.columns.is_empty() {
            let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(cell).collect()).collect();
            let widths: Vec<usize> = (0..self.columns.len())
                .map(|i| cells.iter().map(|r| r[i].len()).chain([self.columns[i].len()]).max().unwrap_or(0))
                .collect();
            if !self.fields.is_empty() {
                s.push('\n');
            }
            let line = |s: &mut String, items: &[String]| {
                let parts: Vec<String> = items.iter().zip(&widths).map(|(c, w)| format!("{c:w$}")).collect();
                let _ = writeln!(s, "{}", parts.join("  ").trim_end());
            };
            line(&mut s, &self.columns);
            for r in &cells {
                line(&mut s, r);
            }
        }
        s
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn sample() -> Report {
        let mut r = Report::new().field("status", "ok").field("count", 2).columns(&["index", "margin"]);
        r.push_row(vec![json!(0), json!(1)]);
        r.push_row(vec![json!(1), Value::Null]);
        r
    }

    #[test]
    fn json_has_sorted_fields_and_rows() {
        let s = sample().render(Format::Json);
        assert!(s.find("\"count\"").unwrap() < s.find("\"status\"").unwrap());
        assert_eq!(sample().to_json()["rows"][1]["margin"], Value::Null);
    }

    #[test]
    fn csv_and_text_layouts() {
        let csv = sample().render(Format::Csv);
        assert!(csv.contains("index,margin\n0,1\n1,\n"));
        let text = sample().render(Format::Text);
        assert!(text.starts_with("count   2\nstatus  ok\n"));
        assert!(text.contains("index  margin\n0      1\n1\n"));
    }
}
