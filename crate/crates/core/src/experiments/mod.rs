//! Seeded recipes that run the simulations behind each claim and package the
//! results as reports.
//!
//! A report carries its full configuration and seed. Every Monte Carlo
//! figure comes with a standard error in a sibling `<name>_se` column.
//! Reruns with the same configuration and seed reproduce every number
//! exactly; only `runtime_s` varies, and callers that need byte-identical
//! output drop it with [`ExperimentReport::without_timing`].

use std::io::{self, Write};
use std::time::Instant;

use indexmap::IndexMap;
use serde::Serialize;
use serde_json::Value;

use crate::numeric::Estimate;

mod cheeger;
mod counterexample;
mod scan;
mod sprinkling;

pub use cheeger::{percolated_expander_cheeger, CheegerRunConfig};
pub use counterexample::{counterexample_demo, CounterexampleConfig, CounterexampleKind};
pub use scan::{threshold_scan, uniqueness_scan, GridMode, ScanConfig};
pub use sprinkling::{sprinkling_giant_demo, FirstPhaseSize, SprinklingConfig};

/// One row of a point table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportPoint {
    /// Which table the row belongs to (usually the graph family).
    pub series: String,
    pub values: IndexMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub id: String,
    pub config: Value,
    pub points: Vec<ReportPoint>,
    pub summary: IndexMap<String, Value>,
    pub seed: u64,
    pub runtime_s: Option<f64>,
}

impl ExperimentReport {
    fn new(id: &str, config: &impl Serialize, seed: u64) -> Self {
        ExperimentReport {
            id: id.to_string(),
            config: serde_json::to_value(config).expect("configs serialize"),
            points: Vec::new(),
            summary: IndexMap::new(),
            seed,
            runtime_s: None,
        }
    }

    pub fn without_timing(mut self) -> Self {
        self.runtime_s = None;
        self
    }

    pub fn summary_f64(&self, key: &str) -> Option<f64> {
        self.summary.get(key).and_then(Value::as_f64)
    }

    /// Points of one series, in insertion order.
    pub fn series<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a ReportPoint> + 'a {
        self.points.iter().filter(move |p| p.series == name)
    }

    fn put(&mut self, key: impl Into<String>, value: impl Into<Value>) {
        self.summary.insert(key.into(), value.into());
    }

    /// Stores `key` and `key_se`.
    fn put_estimate(&mut self, key: &str, e: Estimate) {
        self.put(key, num(e.mean));
        self.put(format!("{key}_se"), num(e.se));
    }

    fn finish(mut self, started: Instant) -> Self {
        self.runtime_s = Some(started.elapsed().as_secs_f64());
        self
    }
}

/// JSON number, or `null` for non-finite values.
fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

/// Builds a point row from `(column, value)` pairs.
fn point(series: &str, cols: &[(&str, f64)]) -> ReportPoint {
    ReportPoint {
        series: series.to_string(),
        values: cols.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
    }
}

pub fn write_report_json<W: Write>(mut w: W, report: &ExperimentReport) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut w, report)?;
    writeln!(w)
}

/// Flat CSV of all points: a `series` column, then the union of value
/// columns in first-seen order (empty cells where a row lacks a column).
pub fn write_points_csv<W: Write>(mut w: W, report: &ExperimentReport, comments: &[String]) -> io::Result<()> {
    crate::percolation::write_comments(&mut w, comments)?;
    let mut cols: Vec<&str> = Vec::new();
    for p in &report.points {
        for k in p.values.keys() {
            if !cols.contains(&k.as_str()) {
                cols.push(k);
            }
        }
    }
    write!(w, "series")?;
    for c in &cols {
        write!(w, ",{c}")?;
    }
    writeln!(w)?;
    for p in &report.points {
        write!(w, "{}", p.series)?;
        for c in &cols {
            match p.values.get(*c) {
                Some(v) => write!(w, ",{v}")?,
                None => write!(w, ",")?,
            }
        }
        writeln!(w)?;
    }
    Ok(())
}

/// Mean and standard error of per-trial values summed in trial order.
fn estimate_in_order(values: &[f64]) -> Estimate {
    Estimate::from_samples(values)
}

/// Mean and standard error of a 0/1 outcome from its success count.
fn proportion(hits: u64, trials: u64) -> Estimate {
    Estimate::from_sums(hits as f64, hits as f64, trials as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_unions_columns() {
        let mut r = ExperimentReport::new("t", &serde_json::json!({"k": 1}), 7);
        r.points.push(point("a", &[("p", 0.5), ("x", 1.0)]));
        r.points.push(point("b", &[("p", 0.25), ("y", 2.0)]));
        let mut out = Vec::new();
        write_points_csv(&mut out, &r, &["seed=7".into()]).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "# seed=7\nseries,p,x,y\na,0.5,1,\nb,0.25,,2\n"
        );
        r.put("nan", num(f64::NAN));
        let mut js = Vec::new();
        write_report_json(&mut js, &r).unwrap();
        let v: Value = serde_json::from_slice(&js).unwrap();
        assert_eq!(v["summary"]["nan"], Value::Null);
        assert_eq!(v["seed"], 7);
        assert_eq!(v["runtime_s"], Value::Null);
        for key in ["id", "config", "points", "summary", "seed", "runtime_s"] {
            assert!(v.get(key).is_some());
        }
    }
}
