//! Output rendering. JSON keys are sorted and every float is printed with 17
//! significant digits, so identical inputs give byte-identical output.

use std::io;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::config::OutputFormat;

/// A command result: what went in, what came out, optional self-checks and an
/// optional table that CSV output prints verbatim.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub command: String,
    pub inputs: Map<String, Value>,
    pub outputs: Map<String, Value>,
    pub checks: Vec<Value>,
    pub table: Option<Table>,
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn as_objects(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|r| Value::Object(self.columns.iter().cloned().zip(r.iter().cloned()).collect()))
                .collect(),
        )
    }
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.into(),
            ..Default::default()
        }
    }

    pub fn input(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.inputs.insert(key.into(), to_value(value));
        self
    }

    pub fn output(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.outputs.insert(key.into(), to_value(value));
        self
    }

    pub fn check(&mut self, name: &str, pass: bool, lhs: impl Serialize, rhs: impl Serialize, tolerance: Option<f64>) {
        let mut m = Map::new();
        m.insert("name".into(), Value::String(name.into()));
        m.insert("pass".into(), Value::Bool(pass));
        m.insert("lhs".into(), to_value(lhs));
        m.insert("rhs".into(), to_value(rhs));
        m.insert("tolerance".into(), to_value(tolerance));
        self.checks.push(Value::Object(m));
    }

    pub fn to_json_value(&self) -> Value {
        let mut outputs = self.outputs.clone();
        if let Some(t) = &self.table {
            outputs.insert("rows".into(), t.as_objects());
        }
        let mut root = Map::new();
        root.insert("command".into(), Value::String(self.command.clone()));
        root.insert("inputs".into(), Value::Object(self.inputs.clone()));
        root.insert("outputs".into(), Value::Object(outputs));
        root.insert("checks".into(), Value::Array(self.checks.clone()));
        Value::Object(root)
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => {
                let mut s = to_json_string(&self.to_json_value());
                s.push('\n');
                s
            }
            OutputFormat::Csv => self.render_csv(),
            OutputFormat::Pretty => self.render_pretty(),
        }
    }

    fn render_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        match &self.table {
            Some(t) => {
                w.write_record(&t.columns).expect("in-memory write");
                for row in &t.rows {
                    w.write_record(row.iter().map(scalar_text)).expect("in-memory write");
                }
            }
            None => {
                w.write_record(["key", "value"]).expect("in-memory write");
                let mut flat = Vec::new();
                flatten("", &Value::Object(self.outputs.clone()), &mut flat);
                for (k, v) in flat {
                    w.write_record([k, v]).expect("in-memory write");
                }
            }
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv")
    }

    fn render_pretty(&self) -> String {
        let mut out = format!("{}\n", self.command);
        let section = |out: &mut String, title: &str, map: &Map<String, Value>| {
            if map.is_empty() {
                return;
            }
            out.push_str(&format!("{title}:\n"));
            let width = map.keys().map(String::len).max().unwrap_or(0);
            for (k, v) in map {
                out.push_str(&format!("  {k:<width$}  {}\n", scalar_text(v)));
            }
        };
        section(&mut out, "inputs", &self.inputs);
        section(&mut out, "outputs", &self.outputs);
        if let Some(t) = &self.table {
            let cells: Vec<Vec<String>> = t.rows.iter().map(|r| r.iter().map(scalar_text).collect()).collect();
            let widths: Vec<usize> = t
                .columns
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    cells
                        .iter()
                        .map(|r| r[i].chars().count())
                        .chain([c.len()])
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            let line = |vals: &[String]| {
                let padded: Vec<String> = vals.iter().zip(&widths).map(|(v, w)| format!("{v:<w$}")).collect();
                format!("  {}\n", padded.join("  ").trim_end())
            };
            out.push_str(&line(&t.columns));
            for r in &cells {
                out.push_str(&line(r));
            }
        }
        for c in self.checks.iter().filter(|c| c.get("name").is_some()) {
            let pass = c.get("pass").and_then(Value::as_bool).unwrap_or(false);
            let name = c.get("name").map(scalar_text).unwrap_or_default();
            out.push_str(&format!("  [{}] {name}\n", if pass { "pass" } else { "FAIL" }));
        }
        out
    }
}

pub fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("serializable report value")
}

/// Formats `f64` as `d.ddddddddddddddddde±x`.
struct DeterministicFloats;

impl serde_json::ser::Formatter for DeterministicFloats {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{}", format_float(value))
    }
}

pub fn format_float(v: f64) -> String {
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v:.16e}")
}

pub fn to_json_string(v: &Value) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, DeterministicFloats);
    v.serialize(&mut ser).expect("in-memory serialization");
    String::from_utf8(buf).expect("utf-8 json")
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Number(n) => match (n.as_i64(), n.as_u64()) {
            (Some(i), _) => i.to_string(),
            (_, Some(u)) => u.to_string(),
            _ => format_float(n.as_f64().unwrap_or(f64::NAN)),
        },
        other => to_json_string(other),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) => {
            for (k, child) in m {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, child, out);
            }
        }
        other => out.push((prefix.to_string(), scalar_text(other))),
    }
}
