//! Machine-readable report documents emitted by the CLI.
//!
//! Serialization is deterministic: object keys are sorted, rows keep the
//! order in which they were produced, and nothing time-dependent is written.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{Map, Value};

pub const SCHEMA_VERSION: &str = "1.0";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Table,
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "table" => Ok(Format::Table),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!(
                "unknown format {other:?} (expected table, json or csv)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportDocument {
    pub schema_version: String,
    pub command: String,
    pub parameters: Map<String, Value>,
    pub rows: Vec<Map<String, Value>>,
    pub summary: Map<String, Value>,
    /// Column order for table and CSV output.
    #[serde(skip)]
    pub columns: Vec<&'static str>,
}

impl ReportDocument {
    pub fn new(command: &str, columns: Vec<&'static str>) -> Self {
        ReportDocument {
            schema_version: SCHEMA_VERSION.to_string(),
            command: command.to_string(),
            parameters: Map::new(),
            rows: Vec::new(),
            summary: Map::new(),
            columns,
        }
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.parameters.insert(key.to_string(), to_value(value));
        self
    }

    pub fn summarize(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.summary.insert(key.to_string(), to_value(value));
        self
    }

    /// Appends a row; every key must be one of the declared columns.
    pub fn push_row(&mut self, fields: Vec<(&'static str, Value)>) {
        debug_assert!(fields.iter().all(|(k, _)| self.columns.contains(k)));
        self.rows.push(
            fields
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
        );
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
            Format::Table => self.to_table(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report is serializable");
        s.push('\n');
        s
    }

    fn cells(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|row| {
                self.columns
                    .iter()
                    .map(|c| row.get(*c).map(cell).unwrap_or_default())
                    .collect()
            })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for row in self.cells() {
            w.write_record(&row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 cells")
    }

    pub fn to_table(&self) -> String {
        let cells = self.cells();
        let widths: Vec<usize> = self
            .columns
            .iter()
            .enumerate()
            .map(|(k, c)| {
                cells
                    .iter()
                    .map(|r| r[k].chars().count())
                    .chain(std::iter::once(c.len()))
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let mut out = String::new();
        let _ = writeln!(out, "# {}", self.command);
        for (k, v) in &self.parameters {
            let _ = writeln!(out, "#   {k} = {}", cell(v));
        }
        let line = |out: &mut String, row: &[String]| {
            let padded: Vec<String> = row
                .iter()
                .zip(&widths)
                .map(|(s, w)| format!("{s:>w$}"))
                .collect();
            let _ = writeln!(out, "{}", padded.join("  ").trim_end());
        };
        let header: Vec<String> = self.columns.iter().map(|c| c.to_string()).collect();
        line(&mut out, &header);
        for row in &cells {
            line(&mut out, row);
        }
        for (k, v) in &self.summary {
            let _ = writeln!(out, "{k}: {}", cell(v));
        }
        out
    }
}

fn to_value(value: impl Serialize) -> Value {
    serde_json::to_value(value).expect("report values are serializable")
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => "-".to_string(),
        Value::String(s) => s.clone(),
        Value::Array(items) => {
            let inner: Vec<String> = items.iter().map(cell).collect();
            format!("[{}]", inner.join(","))
        }
        Value::Object(map) => {
            let inner: Vec<String> = map.values().map(cell).collect();
            format!("({})", inner.join(","))
        }
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn sample() -> ReportDocument {
        let mut doc = ReportDocument::new("demo", vec!["c", "free", "witness"]);
        doc.param("q", 9).param("p", 3);
        doc.push_row(vec![
            ("c", json!(1)),
            ("free", json!(true)),
            ("witness", Value::Null),
        ]);
        doc.push_row(vec![
            ("c", json!(5)),
            ("free", json!(false)),
            ("witness", json!([1, 1])),
        ]);
        doc.summarize("members", [1]);
        doc
    }

    #[test]
    fn json_keys_are_sorted_and_stable() {
        let doc = sample();
        let a = doc.to_json();
        assert_eq!(a, sample().to_json());
        assert!(a.find("\"p\"").unwrap() < a.find("\"q\"").unwrap());
        assert!(a.ends_with('\n'));
        assert!(!a.contains("columns"));
    }

    #[test]
    fn csv_quotes_lists() {
        let csv = sample().to_csv();
        assert_eq!(csv, "c,free,witness\n1,true,-\n5,false,\"[1,1]\"\n");
    }

    #[test]
    fn table_aligns_columns() {
        let t = sample().to_table();
        assert!(t.starts_with("# demo\n#   p = 3\n#   q = 9\n"));
        assert!(t.contains("c   free  witness\n"));
        assert!(t.contains("5  false    [1,1]\n"));
        assert!(t.ends_with("members: [1]\n"));
    }

    #[test]
    fn format_parsing() {
        assert_eq!("csv".parse::<Format>().unwrap(), Format::Csv);
        assert!("xml".parse::<Format>().is_err());
    }
}
