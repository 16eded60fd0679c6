//! Machine-readable results: a JSON record per run and CSV tables.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thermosup::qmath::ComplexMatrix;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub experiment: String,
    pub inputs: BTreeMap<String, Value>,
    pub outputs: BTreeMap<String, Value>,
    pub tolerances: BTreeMap<String, f64>,
    pub versions: BTreeMap<String, String>,
}

impl ResultRecord {
    pub fn new(experiment: &str) -> Self {
        let mut versions = BTreeMap::new();
        versions.insert("thermosup".to_string(), env!("CARGO_PKG_VERSION").to_string());
        Self {
            experiment: experiment.to_string(),
            inputs: BTreeMap::new(),
            outputs: BTreeMap::new(),
            tolerances: BTreeMap::new(),
            versions,
        }
    }

    pub fn input(&mut self, key: &str, value: impl Into<Value>) {
        self.inputs.insert(key.to_string(), value.into());
    }

    pub fn output(&mut self, key: &str, value: impl Into<Value>) {
        self.outputs.insert(key.to_string(), value.into());
    }

    pub fn tolerance(&mut self, key: &str, value: f64) {
        self.tolerances.insert(key.to_string(), value);
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("record is plain data");
        s.push('\n');
        s
    }

    pub fn from_json_str(s: &str) -> Result<Self, CliError> {
        serde_json::from_str(s).map_err(|e| CliError::Parse(e.to_string()))
    }
}

/// Complex matrix as rows of `[re, im]` pairs.
pub fn matrix_value(m: &ComplexMatrix) -> Value {
    Value::Array(m.nested_rows().iter().map(|row| row.iter().map(|z| json!([z.re, z.im])).collect()).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(usize),
    Float(f64),
    Text(String),
}

/// Columnar output with a fixed header.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

/// 17 significant digits, enough to round-trip any f64.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Int(i) => i.to_string(),
                    Cell::Float(x) => format_float(*x),
                    Cell::Text(s) => s.clone(),
                })
                .collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let mut r = ResultRecord::new("demo");
        r.input("t0", "inf");
        r.output("visibility", 0.534446645388523_f64);
        r.output("tiny", 1.0000000000000002e-300_f64);
        r.output("matrix", matrix_value(&ComplexMatrix::identity(2)));
        r.tolerance("oracle", 1e-12);
        let back = ResultRecord::from_json_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert!(ResultRecord::from_json_str("{").is_err());
    }

    #[test]
    fn csv_layout() {
        let t = Table { header: vec!["collision", "trace_distance"], rows: vec![vec![Cell::Int(1), Cell::Float(0.1)]] };
        assert_eq!(t.to_csv(), "collision,trace_distance\n1,1.0000000000000001e-1\n");
        let empty = Table { header: vec!["t0", "t1", "visibility"], rows: vec![] };
        assert_eq!(empty.to_csv(), "t0,t1,visibility\n");
        let x = 0.1 + 0.2;
        assert_eq!(format_float(x).parse::<f64>().unwrap(), x);
        assert_eq!(format_float(f64::INFINITY), "inf");
    }
}
