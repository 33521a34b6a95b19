//! CSV and JSON rendering of sweep tables. Output is byte-deterministic.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::sweep::{Cell, Reason, SweepSpec, SweepTable};

/// Token written in place of a missing CSV value.
pub const NA: &str = "NA";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, thiserror::Error)]
pub enum EmitError {
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("cannot write to stdout: {0}")]
    Stdout(io::Error),
}

fn number(v: f64) -> String {
    ryu::Buffer::new().format_finite(v).to_owned()
}

/// Distinct NA reasons of a row, in column order, joined with `|`.
fn row_reasons(cells: &[Cell]) -> String {
    let mut seen: Vec<Reason> = Vec::new();
    for c in cells {
        if let Cell::Na(r) = c {
            if !seen.contains(r) {
                seen.push(*r);
            }
        }
    }
    seen.iter().map(|r| r.code()).collect::<Vec<_>>().join("|")
}

/// Header `gamma,h,<quantity columns>,reason`, then one newline-terminated row per point.
pub fn to_csv(table: &SweepTable) -> String {
    let mut out = String::new();
    out.push_str(&table.columns.join(","));
    out.push_str(",reason\n");
    for row in &table.rows {
        out.push_str(&number(row.gamma));
        out.push(',');
        out.push_str(&number(row.h));
        for c in &row.cells {
            out.push(',');
            match c {
                Cell::Value(v) => out.push_str(&number(*v)),
                Cell::Na(_) => out.push_str(NA),
            }
        }
        out.push(',');
        out.push_str(&row_reasons(&row.cells));
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct JsonTable<'a> {
    spec: &'a SweepSpec,
    columns: &'a [&'static str],
    rows: Vec<Vec<Value>>,
    /// Row index to column name to reason code, for every NA cell.
    reasons: BTreeMap<usize, BTreeMap<&'static str, &'static str>>,
}

/// `{spec, columns, rows, reasons}`; NA cells are `null` in `rows`.
pub fn to_json(table: &SweepTable) -> String {
    let mut reasons = BTreeMap::new();
    let rows = table
        .rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut values = vec![Value::from(row.gamma), Value::from(row.h)];
            for (j, c) in row.cells.iter().enumerate() {
                match c {
                    Cell::Value(v) => values.push(Value::from(*v)),
                    Cell::Na(r) => {
                        values.push(Value::Null);
                        reasons
                            .entry(i)
                            .or_insert_with(BTreeMap::new)
                            .insert(table.columns[j + 2], r.code());
                    }
                }
            }
            values
        })
        .collect();
    let doc = JsonTable { spec: &table.spec, columns: &table.columns, rows, reasons };
    let mut s = serde_json::to_string_pretty(&doc).expect("sweep tables serialize");
    s.push('\n');
    s
}

pub fn render(table: &SweepTable, format: Format) -> String {
    match format {
        Format::Csv => to_csv(table),
        Format::Json => to_json(table),
    }
}

/// Writes to `destination`, or stdout when it is `None`.
pub fn emit_table(table: &SweepTable, format: Format, destination: Option<&Path>) -> Result<(), EmitError> {
    let text = render(table, format);
    match destination {
        Some(path) => {
            fs::write(path, text).map_err(|source| EmitError::Io { path: path.to_owned(), source })
        }
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(EmitError::Stdout)
        }
    }
}
