//! CSV outputs. Column sets are fixed:
//!
//! * area table: `b,area,error_estimate`
//! * `H(B, d₀)` table: `degree,dimension,representative,expected,matches`

use quadric_core::bo::BHomologyTable;
use quadric_core::semitoric::{AlphaCurve, SemitoricError};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AreaRow {
    pub b: f64,
    pub area: f64,
    pub error_estimate: f64,
}

/// `n` evenly spaced values strictly inside `(−1, 1)`.
pub fn b_grid(n: usize) -> Vec<f64> {
    (1..=n).map(|i| -1.0 + 2.0 * i as f64 / (n + 1) as f64).collect()
}

pub fn area_table(bs: &[f64]) -> Result<Vec<AreaRow>, SemitoricError> {
    bs.iter()
        .map(|&b| {
            let q = AlphaCurve::new(b)?.area();
            Ok(AreaRow { b, area: q.value, error_estimate: q.error })
        })
        .collect()
}

fn to_string<T: Serialize>(rows: impl IntoIterator<Item = T>) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn area_csv(rows: &[AreaRow]) -> Result<String, csv::Error> {
    to_string(rows)
}

pub fn b_homology_csv(table: &BHomologyTable) -> Result<String, csv::Error> {
    to_string(&table.rows)
}

pub fn read_area_csv(text: &str) -> Result<Vec<AreaRow>, csv::Error> {
    csv::Reader::from_reader(text.as_bytes()).deserialize().collect()
}
