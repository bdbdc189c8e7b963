use std::io::{self, Write};

use serde::Serialize;
use serde_json::{Map, Value};

use crate::args::Format;
use crate::failure::Failure;

/// What a command produced: a JSON object, plus optional rows for CSV.
pub struct Report {
    pub body: Map<String, Value>,
    pub table: Option<Table>,
    /// Exit status after printing, for outcomes that are not errors.
    pub status: i32,
    /// Reported on stderr after the body, e.g. a series that ran out of terms.
    pub trailing: Option<Failure>,
}

pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

impl Report {
    pub fn new() -> Self {
        Self { body: Map::new(), table: None, status: 0, trailing: None }
    }

    pub fn set(mut self, key: &str, value: impl Serialize) -> Self {
        let value = serde_json::to_value(value).unwrap_or(Value::Null);
        self.body.insert(key.to_string(), value);
        self
    }

    pub fn table(mut self, header: Vec<&'static str>, rows: Vec<Vec<f64>>) -> Self {
        self.table = Some(Table { header, rows });
        self
    }

    pub fn write(&self, format: Format, out: &mut impl Write) -> io::Result<()> {
        match format {
            Format::Json => {
                serde_json::to_writer(&mut *out, &self.body)?;
                writeln!(out)
            }
            Format::Csv => match &self.table {
                Some(table) => {
                    writeln!(out, "{}", table.header.join(","))?;
                    for row in &table.rows {
                        let cells: Vec<String> = row.iter().map(|&x| number(x)).collect();
                        writeln!(out, "{}", cells.join(","))?;
                    }
                    Ok(())
                }
                None => {
                    let scalars: Vec<(&String, &Value)> =
                        self.body.iter().filter(|(_, v)| !v.is_array() && !v.is_object()).collect();
                    let keys: Vec<&str> = scalars.iter().map(|(k, _)| k.as_str()).collect();
                    let cells: Vec<String> = scalars.iter().map(|(_, v)| cell(v)).collect();
                    writeln!(out, "{}", keys.join(","))?;
                    writeln!(out, "{}", cells.join(","))
                }
            },
        }
    }
}

/// Shortest decimal that round-trips, as in the JSON output.
fn number(x: f64) -> String {
    if x.is_finite() {
        serde_json::to_string(&x).unwrap_or_else(|_| x.to_string())
    } else {
        x.to_string()
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
