//! CSV, JSON and manifest writers. Floats in CSV carry 17 significant
//! digits so that every value parses back to the same bits.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::Result;

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
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

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Text(String::new()), Cell::Num)
    }
}

pub fn format_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "nan".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

pub fn csv_string<S: AsRef<str>>(header: &[S], rows: &[Vec<Cell>]) -> String {
    let mut out = String::new();
    let h: Vec<&str> = header.iter().map(|s| s.as_ref()).collect();
    out.push_str(&h.join(","));
    out.push('\n');
    for row in rows {
        for (i, c) in row.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            match c {
                Cell::Num(v) => out.push_str(&format_float(*v)),
                Cell::Int(v) => {
                    let _ = write!(out, "{v}");
                }
                Cell::Text(s) => out.push_str(s),
            }
        }
        out.push('\n');
    }
    out
}

/// Collects the paths written by one command.
#[derive(Debug)]
pub struct OutDir {
    pub root: PathBuf,
    pub written: Vec<String>,
}

impl OutDir {
    pub fn create(root: &Path) -> Result<Self> {
        std::fs::create_dir_all(root)?;
        Ok(Self {
            root: root.to_path_buf(),
            written: Vec::new(),
        })
    }

    pub fn path(&self, rel: &str) -> PathBuf {
        self.root.join(rel)
    }

    pub fn write(&mut self, rel: &str, contents: &str) -> Result<()> {
        let p = self.path(rel);
        if let Some(parent) = p.parent() {
            std::fs::create_dir_all(parent)?;
        }
        std::fs::write(&p, contents)?;
        self.written.push(rel.to_string());
        Ok(())
    }

    pub fn csv<S: AsRef<str>>(&mut self, rel: &str, header: &[S], rows: &[Vec<Cell>]) -> Result<()> {
        self.write(rel, &csv_string(header, rows))
    }

    pub fn json<T: Serialize>(&mut self, rel: &str, value: &T) -> Result<()> {
        let mut s = serde_json::to_string_pretty(value)?;
        s.push('\n');
        self.write(rel, &s)
    }
}

/// Everything needed to re-run a command.
#[derive(Debug, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub mode: String,
    pub argv: Vec<String>,
    pub config_path: Option<String>,
    pub overrides: Vec<String>,
    /// Effective configuration after defaults and overrides.
    pub config: serde_json::Value,
    pub threads: Option<usize>,
    pub status: String,
    pub exit_code: i32,
    pub outputs: Vec<String>,
    pub wall_time_s: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip_through_csv() {
        for v in [0.1 + 0.2, -1e-300, 123456.789, std::f64::consts::PI] {
            let s = format_float(v);
            assert_eq!(s.parse::<f64>().unwrap(), v, "{s}");
        }
        let csv = csv_string(&["a", "b"], &[vec![Cell::Num(1.0), Cell::Text("x".into())]]);
        assert_eq!(csv, "a,b\n1.0000000000000000e0,x\n");
    }
}
