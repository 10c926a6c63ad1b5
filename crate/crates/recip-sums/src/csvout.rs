//! Minimal RFC-4180-style CSV emission: mandatory header row, LF line
//! endings, quoting only when a field contains a comma, quote or newline.
//! Complex values are always written as two columns (re, im). The column
//! set of a table is fixed by its constructor, never by the data.

use num_complex::Complex64;

#[derive(Debug, Clone)]
pub struct CsvTable {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(header: Vec<&'static str>) -> Self {
        CsvTable { header, rows: Vec::new() }
    }

    pub fn header(&self) -> &[&'static str] {
        &self.header
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.header.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

impl std::fmt::Display for CsvTable {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(out, "{}", join_escaped(self.header.iter().map(|s| s.to_string())))?;
        for row in &self.rows {
            writeln!(out, "{}", join_escaped(row.iter().cloned()))?;
        }
        Ok(())
    }
}

fn join_escaped<I: Iterator<Item = String>>(fields: I) -> String {
    fields
        .map(|f| {
            if f.contains(',') || f.contains('"') || f.contains('\n') {
                format!("\"{}\"", f.replace('"', "\"\""))
            } else {
                f
            }
        })
        .collect::<Vec<_>>()
        .join(",")
}

/// Shortest round-trip decimal for a float (Rust's default `Display`).
pub fn fmt_f64(x: f64) -> String {
    format!("{x}")
}

/// The two CSV cells of a complex value.
pub fn complex_cells(z: Complex64) -> (String, String) {
    (fmt_f64(z.re), fmt_f64(z.im))
}

/// Empty cell for a column that does not apply to this row.
pub fn na() -> String {
    String::new()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_then_rows() {
        let mut t = CsvTable::new(vec!["a", "b"]);
        t.push(vec!["1".into(), "x,y".into()]);
        assert_eq!(t.to_string(), "a,b\n1,\"x,y\"\n");
    }

    #[test]
    fn empty_table_is_header_only() {
        let t = CsvTable::new(vec!["a", "b"]);
        assert_eq!(t.to_string(), "a,b\n");
    }

    #[test]
    fn quotes_doubled() {
        let mut t = CsvTable::new(vec!["a"]);
        t.push(vec!["say \"hi\"".into()]);
        assert_eq!(t.to_string(), "a\n\"say \"\"hi\"\"\"\n");
    }
}
