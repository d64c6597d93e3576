//! Rectangular numeric tables and their CSV form.
//!
//! Files start with `#` comment lines (tool version, command, resolved
//! configuration), then a line of column names, then one line per row.
//! Numbers are written with 17 significant digits so they read back
//! bit-exactly.

use std::fmt::Write as _;
use std::io;
use std::path::Path;

#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub header: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl ResultTable {
    pub fn new(columns: &[&str]) -> Self {
        Self { header: Vec::new(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the columns");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for h in &self.header {
            for line in h.lines() {
                let _ = writeln!(s, "# {line}");
            }
        }
        let _ = writeln!(s, "{}", self.columns.join(","));
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(|v| format!("{v:.16e}")).collect();
            let _ = writeln!(s, "{}", cells.join(","));
        }
        s
    }

    pub fn from_csv(text: &str) -> Result<Self, String> {
        let mut header = Vec::new();
        let mut columns: Option<Vec<String>> = None;
        let mut rows = Vec::new();
        for (n, line) in text.lines().enumerate() {
            if let Some(h) = line.strip_prefix('#') {
                header.push(h.strip_prefix(' ').unwrap_or(h).to_string());
            } else if line.trim().is_empty() {
                continue;
            } else if columns.is_none() {
                columns = Some(line.split(',').map(str::to_string).collect());
            } else {
                let row = line
                    .split(',')
                    .map(|v| v.trim().parse::<f64>().map_err(|e| format!("line {}: {v:?}: {e}", n + 1)))
                    .collect::<Result<Vec<_>, _>>()?;
                if row.len() != columns.as_ref().map_or(0, Vec::len) {
                    return Err(format!("line {}: expected {} values", n + 1, columns.as_ref().map_or(0, Vec::len)));
                }
                rows.push(row);
            }
        }
        Ok(Self { header, columns: columns.ok_or("no column line")?, rows })
    }

    pub fn write(&self, path: &Path) -> io::Result<()> {
        std::fs::write(path, self.to_csv()).map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", path.display())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip_is_bit_exact() {
        let mut t = ResultTable::new(&["a", "b"]);
        t.header.push("hannay-vdp test".into());
        t.push(vec![0.1 + 0.2, -1.0 / 3.0]);
        t.push(vec![f64::MIN_POSITIVE, 6.02214076e23]);
        t.push(vec![f64::NAN, -0.0]);
        let back = ResultTable::from_csv(&t.to_csv()).unwrap();
        assert_eq!(back.columns, t.columns);
        assert_eq!(back.header, t.header);
        for (r, s) in back.rows.iter().zip(&t.rows) {
            for (a, b) in r.iter().zip(s) {
                assert!(a.to_bits() == b.to_bits() || (a.is_nan() && b.is_nan()));
            }
        }
    }

    #[test]
    fn ragged_rows_are_rejected() {
        assert!(ResultTable::from_csv("a,b\n1,2\n3\n").is_err());
    }
}
