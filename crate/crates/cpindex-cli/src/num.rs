//! Fixed-width float output: every float is written with 17 significant
//! digits so that reports are byte-stable and round-trip exactly.

use serde::ser::Error as _;
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

pub fn format17(x: f64) -> String {
    format!("{x:.16e}")
}

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        RawValue::from_string(format17(self.0)).map_err(S::Error::custom)?.serialize(s)
    }
}

impl From<f64> for Num {
    fn from(x: f64) -> Self {
        Num(x)
    }
}

pub fn vector(v: &[f64]) -> Vec<Num> {
    v.iter().copied().map(Num).collect()
}

pub fn matrix(m: &cpindex::nalgebra::DMatrix<f64>) -> Vec<Vec<Num>> {
    m.row_iter().map(|r| r.iter().copied().map(Num).collect()).collect()
}

pub fn rows(m: &[Vec<f64>]) -> Vec<Vec<Num>> {
    m.iter().map(|r| vector(r)).collect()
}
