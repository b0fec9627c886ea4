//! Rendering of command results as human text, JSON or CSV.
//!
//! Every float is rounded to [`SIG_DIGITS`] significant digits and written
//! in plain decimal.

use std::io::{self, Write};

use clap::ValueEnum;
use serde_json::{Map, Value as Json};

pub const SIG_DIGITS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Num(f64),
    Int(u64),
    Text(String),
    Bool(bool),
    /// A quantity that does not exist for these inputs, such as the bounds
    /// of an empty region.
    Empty,
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Num(x)
    }
}

impl From<u64> for Value {
    fn from(x: u64) -> Self {
        Value::Int(x)
    }
}

impl From<bool> for Value {
    fn from(x: bool) -> Self {
        Value::Bool(x)
    }
}

impl From<&str> for Value {
    fn from(x: &str) -> Self {
        Value::Text(x.to_string())
    }
}

impl<T: Into<Value>> From<Option<T>> for Value {
    fn from(x: Option<T>) -> Self {
        x.map_or(Value::Empty, Into::into)
    }
}

impl Value {
    fn plain(&self) -> String {
        match self {
            Value::Num(x) => format_sig(*x),
            Value::Int(x) => x.to_string(),
            Value::Text(s) => s.clone(),
            Value::Bool(b) => b.to_string(),
            Value::Empty => String::new(),
        }
    }

    fn human(&self) -> String {
        match self {
            Value::Empty => "empty".to_string(),
            other => other.plain(),
        }
    }

    fn json(&self) -> Json {
        match self {
            Value::Num(x) if x.is_finite() => Json::Number(
                format_sig(*x)
                    .parse()
                    .expect("plain decimal is a JSON number"),
            ),
            Value::Num(x) if x.is_nan() => Json::Null,
            Value::Num(x) => Json::from(if *x > 0.0 { "inf" } else { "-inf" }),
            Value::Int(x) => Json::from(*x),
            Value::Text(s) => Json::from(s.as_str()),
            Value::Bool(b) => Json::from(*b),
            Value::Empty => Json::Null,
        }
    }
}

/// `x` rounded to [`SIG_DIGITS`] significant digits, in plain decimal.
pub fn format_sig(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    if x == 0.0 {
        return format!("0.{}", "0".repeat(SIG_DIGITS - 1));
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x.abs());
    let (mantissa, exponent) = sci
        .split_once('e')
        .expect("scientific format has an exponent");
    let exponent: i32 = exponent.parse().expect("integer exponent");
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    let sign = if x < 0.0 { "-" } else { "" };
    let body = if exponent < 0 {
        format!("0.{}{digits}", "0".repeat((-exponent - 1) as usize))
    } else {
        let point = exponent as usize + 1;
        if point >= digits.len() {
            format!("{digits}{}", "0".repeat(point - digits.len()))
        } else {
            format!("{}.{}", &digits[..point], &digits[point..])
        }
    };
    format!("{sign}{body}")
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv_line(fields: impl IntoIterator<Item = String>) -> String {
    let mut line = fields
        .into_iter()
        .map(|f| csv_field(&f))
        .collect::<Vec<_>>()
        .join(",");
    line.push('\n');
    line
}

/// Named scalar results of one command, in output order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Record {
    fields: Vec<(&'static str, Value)>,
}

impl Record {
    pub fn new() -> Self {
        Record::default()
    }

    pub fn with(mut self, key: &'static str, value: impl Into<Value>) -> Self {
        self.fields.push((key, value.into()));
        self
    }

    pub fn push(&mut self, key: &'static str, value: impl Into<Value>) {
        self.fields.push((key, value.into()));
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.fields.iter().find(|(k, _)| *k == key).map(|(_, v)| v)
    }

    fn write(&self, format: Format, out: &mut dyn Write) -> io::Result<()> {
        match format {
            Format::Human => {
                let width = self.fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                for (key, value) in &self.fields {
                    writeln!(out, "{key:<width$}  {}", value.human())?;
                }
                Ok(())
            }
            Format::Json => {
                let map: Map<String, Json> = self
                    .fields
                    .iter()
                    .map(|(k, v)| (k.to_string(), v.json()))
                    .collect();
                writeln!(out, "{}", Json::Object(map))
            }
            Format::Csv => {
                out.write_all(csv_line(self.fields.iter().map(|(k, _)| k.to_string())).as_bytes())?;
                out.write_all(csv_line(self.fields.iter().map(|(_, v)| v.plain())).as_bytes())
            }
        }
    }
}

/// Column-oriented results, used for plot data.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Table {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn write_csv(&self, out: &mut dyn Write) -> io::Result<()> {
        out.write_all(csv_line(self.columns.iter().map(|c| c.to_string())).as_bytes())?;
        for row in &self.rows {
            out.write_all(csv_line(row.iter().map(Value::plain)).as_bytes())?;
        }
        Ok(())
    }

    fn write(&self, format: Format, out: &mut dyn Write) -> io::Result<()> {
        match format {
            Format::Human | Format::Csv => self.write_csv(out),
            Format::Json => {
                let rows: Vec<Json> = self
                    .rows
                    .iter()
                    .map(|r| Json::Array(r.iter().map(Value::json).collect()))
                    .collect();
                let mut map = Map::new();
                map.insert("columns".into(), Json::from(self.columns.clone()));
                map.insert("rows".into(), Json::Array(rows));
                writeln!(out, "{}", Json::Object(map))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Output {
    Record(Record),
    Table(Table),
    /// Data already written elsewhere, e.g. a figure sent to `--out`.
    Written(Record),
}

impl Output {
    pub fn write(&self, format: Format, out: &mut dyn Write) -> io::Result<()> {
        match self {
            Output::Record(r) | Output::Written(r) => r.write(format, out),
            Output::Table(t) => t.write(format, out),
        }
    }
}
