//! Deterministic CSV and table rendering. Numbers are written in scientific
//! notation with a configurable count of significant digits (default 17) so
//! identical configs reproduce byte-identical files.

use std::fmt::Write as _;

pub fn fmt_sig(x: f64, sig_digits: usize) -> String {
    format!("{:.*e}", sig_digits.saturating_sub(1), x)
}

pub struct CsvWriter {
    sig_digits: usize,
    buf: String,
}

impl CsvWriter {
    pub fn new(sig_digits: usize) -> Self {
        Self { sig_digits, buf: String::new() }
    }

    pub fn comment(&mut self, text: &str) {
        let _ = writeln!(self.buf, "# {text}");
    }

    pub fn header(&mut self, cols: &[&str]) {
        let _ = writeln!(self.buf, "{}", cols.join(","));
    }

    pub fn row(&mut self, cells: &[Cell]) {
        let rendered: Vec<String> = cells
            .iter()
            .map(|c| match c {
                Cell::Num(x) => fmt_sig(*x, self.sig_digits),
                Cell::Int(i) => i.to_string(),
                Cell::Text(s) => s.clone(),
            })
            .collect();
        let _ = writeln!(self.buf, "{}", rendered.join(","));
    }

    pub fn finish(self) -> String {
        self.buf
    }
}

pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

/// Fixed-width table for terminal output.
pub struct Table {
    headers: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Self {
            headers: headers.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }

    pub fn render(&self) -> String {
        let ncols = self.headers.len();
        let mut widths: Vec<usize> = self.headers.iter().map(|h| h.len()).collect();
        for row in &self.rows {
            for (k, cell) in row.iter().enumerate().take(ncols) {
                widths[k] = widths[k].max(cell.len());
            }
        }
        let mut out = String::new();
        let line = |cells: &[String], widths: &[usize]| {
            cells
                .iter()
                .enumerate()
                .map(|(k, c)| format!("{:<width$}", c, width = widths[k]))
                .collect::<Vec<_>>()
                .join("  ")
        };
        let _ = writeln!(out, "{}", line(&self.headers, &widths));
        let total: usize = widths.iter().sum::<usize>() + 2 * (ncols - 1);
        let _ = writeln!(out, "{}", "-".repeat(total));
        for row in &self.rows {
            let _ = writeln!(out, "{}", line(row, &widths));
        }
        out
    }
}
