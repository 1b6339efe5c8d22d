use std::io::Write;

use serde_json::{json, Value};

use crate::config::{Format, ScanConfig};
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Bool(bool),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            // 17 significant digits round-trip every f64.
            Cell::Num(v) if v.is_finite() => format!("{v:.16e}"),
            Cell::Num(v) => v.to_string(),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Int(v) => json!(v),
            Cell::Bool(v) => json!(v),
            Cell::Text(s) => json!(s),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn to_csv(&self) -> Result<Vec<u8>, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| CliError::Failed(format!("csv: {e}"));
        w.write_record(&self.columns).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv)).map_err(io)?;
        }
        w.into_inner().map_err(|e| CliError::Failed(format!("csv: {e}")))
    }

    fn rows_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|r| Value::Array(r.iter().map(Cell::json).collect()))
                .collect(),
        )
    }
}

fn sidecar_path(output: &std::path::Path) -> std::path::PathBuf {
    let mut name = output.as_os_str().to_owned();
    name.push(".json");
    name.into()
}

/// Writes the table in the configured format. CSV output gets a JSON
/// sidecar holding the configuration and the summary.
pub fn emit(table: &Table, config: &ScanConfig, summary: Value) -> Result<(), CliError> {
    let pretty = |v: &Value| {
        let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
        s.push('\n');
        s
    };
    match (config.format, &config.output_path) {
        (Format::Csv, Some(path)) => {
            std::fs::write(path, table.to_csv()?)?;
            let meta = json!({ "config": config, "columns": table.columns, "summary": summary });
            std::fs::write(sidecar_path(path), pretty(&meta))?;
        }
        (Format::Csv, None) => std::io::stdout().write_all(&table.to_csv()?)?,
        (Format::Json, out) => {
            let doc = json!({
                "config": config,
                "columns": table.columns,
                "rows": table.rows_json(),
                "summary": summary,
            });
            match out {
                Some(path) => std::fs::write(path, pretty(&doc))?,
                None => std::io::stdout().write_all(pretty(&doc).as_bytes())?,
            }
        }
    }
    Ok(())
}
