//! Tables rendered as CSV or JSON, plus the plotting script artifact.

use crate::config::Format;
use anyhow::{Context, Result};
use serde_json::{Map, Value};
use std::io::Write;

pub const UNITS: &str = "energies in units of the exchange coupling J = 1, beta in units of 1/J";

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
    Null,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            // no "-0" in tables
            Cell::Num(v) => format!("{}", if *v == 0.0 { 0.0 } else { *v }),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Null => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Int(v) => Value::from(*v),
            Cell::Text(s) => Value::from(s.clone()),
            Cell::Bool(b) => Value::from(*b),
            Cell::Null => Value::Null,
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

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
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

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Null, Into::into)
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    /// Bumped whenever columns change.
    pub schema: &'static str,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(schema: &'static str, header: &[&'static str]) -> Self {
        Table { schema, header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.header)?;
                for r in &self.rows {
                    w.write_record(r.iter().map(Cell::csv))?;
                }
                let body = String::from_utf8(w.into_inner().context("flushing csv")?)?;
                Ok(format!("# schema: {}\n# units: {UNITS}\n{body}", self.schema))
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|r| {
                        let m: Map<String, Value> =
                            self.header.iter().zip(r).map(|(k, c)| (k.to_string(), c.json())).collect();
                        Value::Object(m)
                    })
                    .collect();
                let mut top = Map::new();
                top.insert("schema".into(), Value::from(self.schema));
                top.insert("units".into(), Value::from(UNITS));
                top.insert("rows".into(), Value::Array(rows));
                Ok(serde_json::to_string_pretty(&Value::Object(top))? + "\n")
            }
        }
    }
}

pub fn emit(text: &str, out: Option<&str>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {path}")),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

/// Python script that plots `y` against `x` from a CSV table, one line per `group` column value.
pub fn plot_script(data: &str, x: &str, ys: &[&str], group: &[&str], logx: bool) -> String {
    let ys = ys.iter().map(|y| format!("{y:?}")).collect::<Vec<_>>().join(", ");
    let group = group.iter().map(|g| format!("{g:?}")).collect::<Vec<_>>().join(", ");
    format!(
        r##"# generated by magnon; {UNITS}
import csv
import sys

import matplotlib.pyplot as plt

DATA = sys.argv[1] if len(sys.argv) > 1 else {data:?}
X = {x:?}
YS = [{ys}]
GROUP = [{group}]

with open(DATA) as fh:
    rows = list(csv.DictReader(line for line in fh if not line.startswith("#")))

fig, axes = plt.subplots(len(YS), 1, squeeze=False, figsize=(6, 3.5 * len(YS)))
for ax, y in zip(axes[:, 0], YS):
    series = {{}}
    for r in rows:
        if r[y] == "":
            continue
        key = ", ".join(f"{{g}}={{r[g]}}" for g in GROUP)
        series.setdefault(key, []).append((float(r[X]), float(r[y])))
    for key, pts in sorted(series.items()):
        pts.sort()
        ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="o", label=key or y)
    if {logx}:
        ax.set_xscale("log")
    ax.set_xlabel(X)
    ax.set_ylabel(y)
    ax.legend(fontsize="small")
fig.tight_layout()
fig.savefig(DATA.rsplit(".", 1)[0] + ".png", dpi=150)
"##,
        logx = if logx { "True" } else { "False" },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_and_json() {
        let mut t = Table::new("demo/1", &["a", "b", "c"]);
        t.push(vec![0.5.into(), Cell::Null, "x,y".into()]);
        let csv = t.render(Format::Csv).unwrap();
        assert!(csv.ends_with("a,b,c\n0.5,,\"x,y\"\n"), "{csv}");
        let json: Value = serde_json::from_str(&t.render(Format::Json).unwrap()).unwrap();
        assert_eq!(json["rows"][0]["b"], Value::Null);
        assert_eq!(json["schema"], "demo/1");
    }
}
