//! Minimal CSV assembly with deterministic float formatting.
//!
//! Floats use the shortest representation that parses back to the same
//! value; missing values are empty cells.

use std::fmt::Write as _;

pub struct Table {
    buf: String,
    columns: usize,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        let mut buf = header.join(",");
        buf.push('\n');
        Self {
            buf,
            columns: header.len(),
        }
    }

    pub fn row(&mut self, cells: &[Option<f64>]) {
        debug_assert_eq!(cells.len(), self.columns);
        for (i, cell) in cells.iter().enumerate() {
            if i > 0 {
                self.buf.push(',');
            }
            if let Some(x) = cell {
                let _ = write!(self.buf, "{}", format_float(*x));
            }
        }
        self.buf.push('\n');
    }

    pub fn finish(self) -> String {
        self.buf
    }
}

/// Shortest round-trip text, switching to exponent form for very small or
/// large magnitudes.
pub fn format_float(x: f64) -> String {
    format!("{x:?}")
}

pub type Rows = Vec<Vec<Option<f64>>>;

/// Parses a table produced by [`Table`] back into a header and rows.
pub fn parse(text: &str) -> Result<(Vec<String>, Rows), String> {
    let mut lines = text.lines();
    let header: Vec<String> = lines
        .next()
        .ok_or("empty table")?
        .split(',')
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let row = line
            .split(',')
            .map(|c| {
                if c.is_empty() {
                    Ok(None)
                } else {
                    c.parse::<f64>().map(Some).map_err(|e| format!("row {}: {e}", i + 1))
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        if row.len() != header.len() {
            return Err(format!(
                "row {} has {} cells, expected {}",
                i + 1,
                row.len(),
                header.len()
            ));
        }
        rows.push(row);
    }
    Ok((header, rows))
}
