//! Tabular output in CSV or JSON with the resolved configuration embedded.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

pub const UNITS_NOTE: &str = "dimensionless: lengths in packet widths, momenta in inverse widths, hbar = m = 1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// Fixed-width scientific notation, 17 significant digits. Rust's float
/// formatting ignores the locale, so output is byte-stable.
fn format_num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "nan".to_owned()
    } else if v > 0.0 {
        "inf".to_owned()
    } else {
        "-inf".to_owned()
    }
}

fn csv_text(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write<W: Write>(&self, config: &Value, format: Format, mut w: W) -> io::Result<()> {
        match format {
            Format::Csv => {
                writeln!(w, "# config: {}", serde_json::to_string(config)?)?;
                writeln!(w, "{}", self.columns.join(","))?;
                for row in &self.rows {
                    let cells: Vec<String> = row
                        .iter()
                        .map(|c| match c {
                            Cell::Num(v) => format_num(*v),
                            Cell::Text(s) => csv_text(s),
                            Cell::Empty => String::new(),
                        })
                        .collect();
                    writeln!(w, "{}", cells.join(","))?;
                }
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let mut m = Map::new();
                        for (name, c) in self.columns.iter().zip(row) {
                            let v = match c {
                                Cell::Num(v) if v.is_finite() => Value::from(*v),
                                Cell::Num(v) => Value::from(format_num(*v)),
                                Cell::Text(s) => Value::from(s.clone()),
                                Cell::Empty => Value::Null,
                            };
                            m.insert((*name).to_owned(), v);
                        }
                        Value::Object(m)
                    })
                    .collect();
                let doc = serde_json::json!({ "config": config, "rows": rows });
                serde_json::to_writer_pretty(&mut w, &doc)?;
                writeln!(w)?;
            }
        }
        w.flush()
    }

    /// Writes to `path`, or stdout for `None` / `-`.
    pub fn write_to(&self, config: &Value, format: Format, path: Option<&Path>) -> io::Result<()> {
        match path {
            Some(p) if p != Path::new("-") => self.write(config, format, BufWriter::new(File::create(p)?)),
            _ => self.write(config, format, io::stdout().lock()),
        }
    }
}
