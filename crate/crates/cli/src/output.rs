//! Deterministic CSV/JSON table emission.
//!
//! Every file starts with the artifact version and the fully resolved run
//! configuration, so identical configurations produce byte-identical files.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::CliError;

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Copy, Clone, PartialEq, Eq, Debug, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// One table cell. Floats are rendered in round-trip scientific notation in
/// CSV and as JSON numbers (null when non-finite) in JSON.
#[derive(Clone, Debug)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => {
                if v.is_finite() {
                    format!("{v:e}")
                } else {
                    "nan".into()
                }
            }
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Cell::Int(v) => (*v).into(),
            Cell::Float(v) => {
                if v.is_finite() {
                    serde_json::Number::from_f64(*v)
                        .map(serde_json::Value::Number)
                        .unwrap_or(serde_json::Value::Null)
                } else {
                    serde_json::Value::Null
                }
            }
            Cell::Text(s) => s.clone().into(),
            Cell::Bool(b) => (*b).into(),
        }
    }
}

/// Assembled table ready for emission.
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Table {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Write the table to `out` (stdout when `None`).
    pub fn write<C: Serialize>(
        &self,
        config: &C,
        format: Format,
        out: Option<&Path>,
    ) -> Result<(), CliError> {
        let config_json = serde_json::to_string(config).expect("config serializes");
        match out {
            Some(path) => {
                let file = File::create(path).map_err(|e| {
                    CliError::usage(format!("cannot create {}: {e}", path.display()))
                })?;
                let mut w = BufWriter::new(file);
                self.emit(&mut w, &config_json, format)
                    .map_err(|e| CliError::usage(format!("write failed: {e}")))
            }
            None => {
                let stdout = io::stdout();
                let mut w = stdout.lock();
                self.emit(&mut w, &config_json, format)
                    .map_err(|e| CliError::usage(format!("write failed: {e}")))
            }
        }
    }

    fn emit<W: Write>(&self, w: &mut W, config_json: &str, format: Format) -> io::Result<()> {
        match format {
            Format::Csv => {
                writeln!(w, "# vertex-oddity {ARTIFACT_VERSION}")?;
                writeln!(w, "# config {config_json}")?;
                writeln!(w, "{}", self.columns.join(","))?;
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(Cell::csv).collect();
                    writeln!(w, "{}", cells.join(","))?;
                }
            }
            Format::Json => {
                let doc = serde_json::json!({
                    "artifact": "vertex-oddity",
                    "version": ARTIFACT_VERSION,
                    "config": serde_json::from_str::<serde_json::Value>(config_json).unwrap(),
                    "columns": self.columns,
                    "rows": self.rows.iter().map(|r| r.iter().map(Cell::json).collect::<Vec<_>>()).collect::<Vec<_>>(),
                });
                writeln!(w, "{}", serde_json::to_string_pretty(&doc)?)?;
            }
        }
        Ok(())
    }
}
