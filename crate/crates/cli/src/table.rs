//! Tidy result tables and their CSV and JSON encodings.
//!
//! Both encodings carry the same cells: floats as `%.12e` text with a C-style
//! exponent, missing values as an empty CSV field or JSON `null`.

use std::str::FromStr;

use anyhow::Result;
use serde_json::{Map, Number, Value};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    /// Non-finite values are written as missing.
    Float(f64),
    Int(i64),
    Text(String),
    Empty,
}

impl Cell {
    pub fn float(x: Option<f64>) -> Cell {
        x.map_or(Cell::Empty, Cell::Float)
    }

    pub fn text(s: impl Into<String>) -> Cell {
        Cell::Text(s.into())
    }

    pub fn int(n: usize) -> Cell {
        Cell::Int(n as i64)
    }

    fn is_missing(&self) -> bool {
        match self {
            Cell::Empty => true,
            Cell::Float(x) => !x.is_finite(),
            _ => false,
        }
    }

    pub fn csv_field(&self) -> String {
        match self {
            _ if self.is_missing() => String::new(),
            Cell::Float(x) => format_float(*x),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => unreachable!(),
        }
    }

    pub fn json_value(&self) -> Value {
        match self {
            _ if self.is_missing() => Value::Null,
            Cell::Float(x) => Value::Number(Number::from_str(&format_float(*x)).expect("formatted float is valid JSON")),
            Cell::Int(n) => Value::from(*n),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Empty => unreachable!(),
        }
    }
}

/// `%.12e`: 13 significant digits, exponent with sign and at least two
/// digits (`1.234567890123e-01`).
pub fn format_float(x: f64) -> String {
    let s = format!("{x:.12e}");
    let (mantissa, exponent) = s.split_once('e').expect("exponent present");
    let exponent: i32 = exponent.parse().expect("integer exponent");
    let sign = if exponent < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exponent.abs())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self { columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        writer.write_record(&self.columns)?;
        for row in &self.rows {
            writer.write_record(row.iter().map(Cell::csv_field))?;
        }
        Ok(writer.into_inner().map_err(|e| e.into_error())?)
    }

    /// `{"command", "columns", "rows": [{column: value}], "meta"}`.
    pub fn to_json(&self, command: &str, meta: Map<String, Value>) -> Result<Vec<u8>> {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let object: Map<String, Value> =
                    self.columns.iter().zip(row).map(|(c, v)| (c.to_string(), v.json_value())).collect();
                Value::Object(object)
            })
            .collect();
        let mut doc = Map::new();
        doc.insert("command".into(), Value::from(command));
        doc.insert("columns".into(), Value::from(self.columns.clone()));
        doc.insert("rows".into(), Value::Array(rows));
        doc.insert("meta".into(), Value::Object(meta));
        let mut out = serde_json::to_vec_pretty(&Value::Object(doc))?;
        out.push(b'\n');
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c_style_exponents() {
        assert_eq!(format_float(0.1234567890123), "1.234567890123e-01");
        assert_eq!(format_float(0.0), "0.000000000000e+00");
        assert_eq!(format_float(-2.5e-300), "-2.500000000000e-300");
        assert_eq!(format_float(12345.0), "1.234500000000e+04");
        assert_eq!(format_float(1.0), "1.000000000000e+00");
    }

    #[test]
    fn missing_values_are_never_nan() {
        let mut t = Table::new(&["E", "G", "flag"]);
        t.push(vec![Cell::Float(0.5), Cell::Float(f64::NAN), Cell::text("even")]);
        t.push(vec![Cell::Float(0.6), Cell::Empty, Cell::text("a,b")]);
        let csv = String::from_utf8(t.to_csv().unwrap()).unwrap();
        assert_eq!(csv, "E,G,flag\n5.000000000000e-01,,even\n6.000000000000e-01,,\"a,b\"\n");
        let json = String::from_utf8(t.to_json("x", Map::new()).unwrap()).unwrap();
        assert!(!json.contains("NaN"));
        assert!(json.contains("\"G\": null"));
        assert!(json.contains("\"E\": 5.000000000000e-01"));
    }
}
