//! Deterministic CSV output: fixed column order, 12 significant digits,
//! byte-identical bodies for identical inputs.

use std::io::Write;

/// A cell value.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    /// Integer, written plain.
    Int(i64),
    /// Float, written with 12 significant digits in scientific notation.
    Float(f64),
    /// Optional float; `None` writes an empty cell.
    MaybeFloat(Option<f64>),
    /// Verbatim text.
    Text(String),
}

impl Cell {
    fn write(&self, out: &mut String) {
        match self {
            Cell::Int(v) => out.push_str(&v.to_string()),
            Cell::Float(v) => out.push_str(&format_float(*v)),
            Cell::MaybeFloat(Some(v)) => out.push_str(&format_float(*v)),
            Cell::MaybeFloat(None) => {}
            Cell::Text(s) => out.push_str(s),
        }
    }
}

/// 12 significant digits, scientific notation.
pub fn format_float(x: f64) -> String {
    format!("{x:.11e}")
}

/// In-memory CSV table with a fixed header.
#[derive(Debug, Clone)]
pub struct CsvTable {
    header: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

impl CsvTable {
    /// New table with the given column order.
    pub fn new(header: Vec<&'static str>) -> Self {
        Self { header, rows: Vec::new() }
    }

    /// Append a row; its length must match the header.
    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.header.len(), "row width must match the header");
        self.rows.push(row);
    }

    /// Number of data rows.
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    /// True when no rows were added.
    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Render the full file body.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                cell.write(&mut out);
            }
            out.push('\n');
        }
        out
    }

    /// Write the rendered body to a file.
    pub fn write_to(&self, path: &std::path::Path) -> std::io::Result<()> {
        let mut f = std::fs::File::create(path)?;
        f.write_all(self.render().as_bytes())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_float(3.125), "3.12500000000e0");
        assert_eq!(format_float(-0.0001), "-1.00000000000e-4");
        assert_eq!(format_float(12345.6789), "1.23456789000e4");
    }

    #[test]
    fn renders_deterministically() {
        let mut t = CsvTable::new(vec!["n", "value", "maybe"]);
        t.push(vec![Cell::Int(3), Cell::Float(0.5), Cell::MaybeFloat(None)]);
        t.push(vec![Cell::Int(4), Cell::Float(1.0), Cell::MaybeFloat(Some(2.0))]);
        let a = t.render();
        let b = t.render();
        assert_eq!(a, b);
        assert_eq!(
            a,
            "n,value,maybe\n3,5.00000000000e-1,\n4,1.00000000000e0,2.00000000000e0\n"
        );
    }
}
