use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::ValueEnum;
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Where results go and what every output file carries: the command line
/// and the seed, as `#` lines in CSV and as fields in JSON.
pub struct Sink {
    pub format: Format,
    pub out: Option<PathBuf>,
    pub command: Vec<String>,
    pub seed: u64,
    pub runtime_s: Option<f64>,
}

impl Sink {
    pub fn comments(&self) -> Vec<String> {
        let mut c = vec![format!("command: percolab {}", self.command.join(" ")), format!("seed: {}", self.seed)];
        if let Some(t) = self.runtime_s {
            c.push(format!("runtime_s: {t}"));
        }
        c
    }

    /// Runs `body` against the output file or stdout.
    pub fn write(&self, body: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> io::Result<()> {
        match &self.out {
            Some(path) => {
                let mut w = BufWriter::new(File::create(path)?);
                body(&mut w)?;
                w.flush()
            }
            None => {
                let stdout = io::stdout();
                let mut w = stdout.lock();
                body(&mut w)?;
                w.flush()
            }
        }
    }

    /// Prints the one-line summary where it does not mix with the data.
    pub fn summary(&self, line: &str) {
        if self.out.is_some() {
            println!("{line}");
        } else {
            eprintln!("{line}");
        }
    }

    /// JSON envelope for non-report results.
    pub fn envelope(&self, result: Value) -> Value {
        let mut m = Map::new();
        m.insert("command".into(), json!(self.command));
        m.insert("seed".into(), json!(self.seed));
        m.insert("result".into(), result);
        if let Some(t) = self.runtime_s {
            m.insert("runtime_s".into(), json!(t));
        }
        Value::Object(m)
    }

    pub fn write_table(&self, table: &Table) -> io::Result<()> {
        match self.format {
            Format::Csv => self.write(|w| {
                percolab::percolation::write_comments(&mut &mut *w, &self.comments())?;
                writeln!(w, "{}", table.columns.join(","))?;
                for row in &table.rows {
                    let cells: Vec<String> = row.iter().map(csv_cell).collect();
                    writeln!(w, "{}", cells.join(","))?;
                }
                Ok(())
            }),
            Format::Json => {
                let rows: Vec<Value> = table
                    .rows
                    .iter()
                    .map(|r| Value::Object(table.columns.iter().cloned().zip(r.iter().cloned()).collect()))
                    .collect();
                self.write_json(&self.envelope(Value::Array(rows)))
            }
        }
    }

    pub fn write_json(&self, v: &Value) -> io::Result<()> {
        self.write(|w| {
            serde_json::to_writer_pretty(&mut *w, v)?;
            writeln!(w)
        })
    }
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Named columns of JSON cells.
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// JSON number, or `null` for non-finite values.
pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}
