//! CSV rendering of sweep tables.
//!
//! Output is UTF-8 with LF line endings, numbers carry 10 significant
//! digits, and identical tables render to identical bytes. SNR columns are
//! dB; skipped cells are left empty with the reason recorded in the
//! diagnostics column.

use super::sweep::SweepTable;
use crate::error::{Error, Result};
use std::path::Path;

/// Scientific notation with 10 significant digits; round-trips through a
/// `f64` parse to the same 10 digits.
pub fn format_number(x: f64) -> String {
    format!("{x:.9e}")
}

/// Renders the table: header `sweep_var,<model>_db...,diagnostics`, one row
/// per grid value.
pub fn render_csv(table: &SweepTable) -> String {
    let mut out = String::new();
    out.push_str("sweep_var");
    for column in &table.columns {
        out.push(',');
        out.push_str(column);
    }
    out.push_str(",diagnostics\n");
    for row in &table.rows {
        out.push_str(&format_number(row.sweep_value));
        for cell in &row.cells {
            out.push(',');
            if let Some(linear) = cell {
                out.push_str(&format_number(10.0 * linear.log10()));
            }
        }
        out.push(',');
        // the diagnostics column must not break the cell structure
        out.push_str(&row.diagnostics.replace(',', ";").replace('\n', " "));
        out.push('\n');
    }
    out
}

pub fn write_csv(table: &SweepTable, path: &Path) -> Result<()> {
    std::fs::write(path, render_csv(table)).map_err(|e| Error::io(path, e))
}
