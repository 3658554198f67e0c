//! Result tables and their CSV encoding.

use std::io::Write;

use crate::error::{Error, Result};
use crate::model::C64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ColumnKind {
    Real,
    /// Written as `<name>_re,<name>_im`.
    Complex,
    Int,
    Text,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Real(f64),
    Complex(C64),
    Int(i64),
    Text(String),
    /// Empty cell(s).
    Missing,
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Real(v)
    }
}

impl From<C64> for Value {
    fn from(v: C64) -> Self {
        Value::Complex(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_string())
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Int(v as i64)
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as i64)
    }
}

impl<T: Into<Value>> From<Option<T>> for Value {
    fn from(v: Option<T>) -> Self {
        v.map_or(Value::Missing, Into::into)
    }
}

/// Seventeen significant digits, enough to round-trip any `f64`.
pub fn format_real(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResultTable {
    pub name: String,
    pub columns: Vec<(String, ColumnKind)>,
    pub rows: Vec<Vec<Value>>,
}

impl ResultTable {
    pub fn new(name: &str, columns: &[(&str, ColumnKind)]) -> Self {
        Self {
            name: name.to_string(),
            columns: columns.iter().map(|&(n, k)| (n.to_string(), k)).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        assert_eq!(
            row.len(),
            self.columns.len(),
            "row width in table {}",
            self.name
        );
        self.rows.push(row);
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|(n, _)| n == name)
    }

    /// Real values of one column (`NaN` where the cell is not real).
    pub fn reals(&self, name: &str) -> Vec<f64> {
        let Some(i) = self.column_index(name) else {
            return Vec::new();
        };
        self.rows
            .iter()
            .map(|r| match r[i] {
                Value::Real(v) => v,
                Value::Int(v) => v as f64,
                _ => f64::NAN,
            })
            .collect()
    }

    pub fn header(&self) -> Vec<String> {
        self.columns
            .iter()
            .flat_map(|(n, k)| match k {
                ColumnKind::Complex => vec![format!("{n}_re"), format!("{n}_im")],
                _ => vec![n.clone()],
            })
            .collect()
    }

    fn record(&self, row: &[Value]) -> Result<Vec<String>> {
        let mut out = Vec::with_capacity(row.len() + 2);
        for ((name, kind), v) in self.columns.iter().zip(row) {
            match (kind, v) {
                (ColumnKind::Complex, Value::Complex(z)) => {
                    out.push(format_real(z.re));
                    out.push(format_real(z.im));
                }
                (ColumnKind::Complex, Value::Missing) => out.extend([String::new(), String::new()]),
                (ColumnKind::Real, Value::Real(x)) => out.push(format_real(*x)),
                (ColumnKind::Int, Value::Int(i)) => out.push(i.to_string()),
                (ColumnKind::Text, Value::Text(s)) => out.push(s.clone()),
                (_, Value::Missing) => out.push(String::new()),
                _ => {
                    return Err(Error::Validation(format!(
                        "value {v:?} does not fit column {name} of table {}",
                        self.name
                    )))
                }
            }
        }
        Ok(out)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(w);
        let io = |e: csv::Error| Error::Validation(format!("writing {}: {e}", self.name));
        wr.write_record(self.header()).map_err(io)?;
        for row in &self.rows {
            wr.write_record(self.record(row)?).map_err(io)?;
        }
        wr.flush()
            .map_err(|e| Error::Validation(format!("writing {}: {e}", self.name)))
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut t = ResultTable::new(
            "demo",
            &[
                ("k", ColumnKind::Real),
                ("eps", ColumnKind::Complex),
                ("label", ColumnKind::Text),
                ("ep", ColumnKind::Int),
            ],
        );
        t.push(vec![
            0.5.into(),
            C64::new(1.0, -2.0).into(),
            "broken".into(),
            true.into(),
        ]);
        t.push(vec![0.1.into(), Value::Missing, "a,b".into(), false.into()]);
        let s = t.to_csv_string().unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "k,eps_re,eps_im,label,ep");
        assert_eq!(
            lines[1],
            "5.0000000000000000e-1,1.0000000000000000e0,-2.0000000000000000e0,broken,1"
        );
        assert_eq!(lines[2], "1.0000000000000001e-1,,,\"a,b\",0");
        assert_eq!(t.reals("k"), vec![0.5, 0.1]);
    }

    #[test]
    fn seventeen_digits_round_trip() {
        for v in [0.1, 1.0 / 3.0, 2f64.sqrt(), -1e-300, 6.02e23] {
            assert_eq!(format_real(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn kind_mismatch_is_an_error() {
        let mut t = ResultTable::new("x", &[("k", ColumnKind::Real)]);
        t.push(vec!["oops".into()]);
        assert!(t.to_csv_string().is_err());
    }
}
