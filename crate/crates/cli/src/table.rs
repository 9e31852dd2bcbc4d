//! Tables written as CSV (with `#` metadata lines) or as JSON
//! `{meta, columns, rows}`.

use std::io::Write;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::args::Format;
use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(u64),
    Bool(bool),
}

impl Cell {
    fn to_csv(self) -> String {
        match self {
            // 17 significant digits, enough to round-trip any f64
            Cell::Float(v) => format!("{v:.16e}"),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
        }
    }

    fn to_json(self) -> Value {
        match self {
            Cell::Float(v) => Value::from(v),
            Cell::Int(v) => Value::from(v),
            Cell::Bool(v) => Value::from(v),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    meta: Vec<(String, Value)>,
    columns: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

#[derive(Serialize)]
struct JsonTable<'a> {
    meta: Map<String, Value>,
    columns: &'a [String],
    rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: Vec<String>) -> Self {
        Self {
            columns,
            ..Self::default()
        }
    }

    pub fn meta(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.meta.push((key.to_string(), value.into()));
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn write<W: Write>(&self, format: Format, out: W) -> Result<(), CliError> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => self.write_json(out),
        }
    }

    fn write_csv<W: Write>(&self, mut out: W) -> Result<(), CliError> {
        for (key, value) in &self.meta {
            let text = match value {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            writeln!(out, "# {key} = {text}")?;
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| c.to_csv()))?;
        }
        w.flush()?;
        Ok(())
    }

    fn write_json<W: Write>(&self, mut out: W) -> Result<(), CliError> {
        let doc = JsonTable {
            meta: self.meta.iter().cloned().collect(),
            columns: &self.columns,
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|c| c.to_json()).collect())
                .collect(),
        };
        serde_json::to_writer_pretty(&mut out, &doc)?;
        writeln!(out)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        let mut t = Table::new(vec!["t".into(), "N".into(), "ok".into()]);
        t.meta("command", "series").meta("rel_tol", 1e-10);
        t.push(vec![Cell::Float(0.1), Cell::Int(3), Cell::Bool(true)]);
        t.push(vec![Cell::Float(-1.0 / 3.0), Cell::Int(20), Cell::Bool(false)]);
        t
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        sample().write(Format::Csv, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# command = series");
        assert_eq!(lines[1], "# rel_tol = 1e-10");
        assert_eq!(lines[2], "t,N,ok");
        assert_eq!(lines[3], "1.0000000000000001e-1,3,true");
        let v: f64 = lines[4].split(',').next().unwrap().parse().unwrap();
        assert_eq!(v, -1.0 / 3.0);
    }

    #[test]
    fn json_layout() {
        let mut buf = Vec::new();
        sample().write(Format::Json, &mut buf).unwrap();
        let v: Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["meta"]["command"], "series");
        assert_eq!(v["columns"][1], "N");
        assert_eq!(v["rows"][1][0].as_f64().unwrap(), -1.0 / 3.0);
        assert_eq!(v["rows"][0][2], true);
    }
}
