//! Flat records and their csv, json-lines and human renderings.

use std::fmt::Write as _;
use std::io::{self, Write};

use clap::ValueEnum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    JsonLines,
    Human,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Float(f64),
    Bool(bool),
    Str(String),
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Float(x)
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Bool(b)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Str(s.to_owned())
    }
}

/// Ordered field list; every record of one table shares the same keys.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Record(pub Vec<(&'static str, Value)>);

impl Record {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, key: &'static str, value: impl Into<Value>) -> Self {
        self.0.push((key, value.into()));
        self
    }

    pub fn keys(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.0.iter().map(|(k, _)| *k)
    }
}

/// 17 significant digits: enough to round-trip every `f64`.
pub fn full_precision(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.16e}")
    }
}

/// Six significant digits, positional for moderate magnitudes.
pub fn human_precision(x: f64) -> String {
    if !x.is_finite() {
        return full_precision(x);
    }
    if x == 0.0 {
        return "0".into();
    }
    // exponent after rounding to six significant digits, as %g does
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..6).contains(&exp) {
        let decimals = (5 - exp) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.into()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').into()
    } else {
        s
    }
}

fn structured(v: &Value) -> String {
    match v {
        Value::Float(x) => full_precision(*x),
        Value::Bool(b) => b.to_string(),
        Value::Str(s) => s.clone(),
    }
}

fn json(v: &Value) -> String {
    match v {
        Value::Float(x) if x.is_finite() => full_precision(*x),
        Value::Float(_) => "null".into(),
        Value::Bool(b) => b.to_string(),
        Value::Str(s) => serde_json::Value::from(s.as_str()).to_string(),
    }
}

fn human(v: &Value) -> String {
    match v {
        Value::Float(x) => human_precision(*x),
        Value::Bool(b) => b.to_string(),
        Value::Str(s) => s.clone(),
    }
}

pub fn render(records: &[Record], format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
            if let Some(first) = records.first() {
                w.write_record(first.keys()).expect("in-memory write");
            }
            for r in records {
                w.write_record(r.0.iter().map(|(_, v)| structured(v))).expect("in-memory write");
            }
            out = String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields");
        }
        Format::JsonLines => {
            for r in records {
                out.push('{');
                for (i, (k, v)) in r.0.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    let _ = write!(out, "\"{k}\":{}", json(v));
                }
                out.push_str("}\n");
            }
        }
        Format::Human => {
            if records.len() == 1 {
                let r = &records[0];
                let width = r.keys().map(str::len).max().unwrap_or(0);
                for (k, v) in &r.0 {
                    let _ = writeln!(out, "{k:<width$}  {}", human(v));
                }
            } else if let Some(first) = records.first() {
                let cells: Vec<Vec<String>> =
                    records.iter().map(|r| r.0.iter().map(|(_, v)| human(v)).collect()).collect();
                let keys: Vec<&str> = first.keys().collect();
                let widths: Vec<usize> = (0..keys.len())
                    .map(|j| cells.iter().map(|row| row[j].len()).chain([keys[j].len()]).max().unwrap_or(0))
                    .collect();
                let line = |fields: Vec<&str>| {
                    let mut s =
                        fields.iter().zip(&widths).map(|(f, w)| format!("{f:>w$}")).collect::<Vec<_>>().join("  ");
                    s.push('\n');
                    s
                };
                out.push_str(&line(keys.clone()));
                for row in &cells {
                    out.push_str(&line(row.iter().map(String::as_str).collect()));
                }
            }
        }
    }
    out
}

pub fn write_records(w: &mut dyn Write, records: &[Record], format: Format) -> io::Result<()> {
    w.write_all(render(records, format).as_bytes())
}
