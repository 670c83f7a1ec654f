//! Gnuplot script emission for sweep CSVs.

use super::sweep::SweepTable;
use crate::error::{Error, Result};
use std::path::Path;

/// A gnuplot script plotting every model column of the CSV against the
/// sweep variable: log x for size sweeps, dB on the y axis. No terminal is
/// forced; pipe into `gnuplot -p <script>` or set one up front.
pub fn plot_script(table: &SweepTable, csv_path: &str) -> String {
    let mut out = String::new();
    out.push_str("# generated by `xlirs sweep --emit-plotscript`\n");
    out.push_str("set datafile separator \",\"\n");
    out.push_str("set key autotitle columnhead\n");
    out.push_str("set key left top\n");
    out.push_str(&format!("set xlabel \"{}\"\n", table.variable.axis_label()));
    out.push_str("set ylabel \"SNR (dB)\"\n");
    if table.variable.log_axis() {
        out.push_str("set logscale x\n");
    }
    out.push_str("set grid\n");
    out.push_str("plot ");
    for (i, _) in table.columns.iter().enumerate() {
        if i > 0 {
            out.push_str(", \\\n     ");
        }
        out.push_str(&format!(
            "\"{csv_path}\" using 1:{} with linespoints",
            i + 2
        ));
    }
    out.push('\n');
    out
}

pub fn write_plot_script(table: &SweepTable, csv_path: &str, script_path: &Path) -> Result<()> {
    std::fs::write(script_path, plot_script(table, csv_path)).map_err(|e| Error::io(script_path, e))
}
