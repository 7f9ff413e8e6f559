use std::io::Write;
use std::path::Path;

use super::experiment::TableRow;
use crate::error::{Error, Result};

const SIGNIFICANT_DIGITS: i32 = 6;

/// Decimal rendering with six significant digits and no trailing zeros.
pub fn format_float(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let magnitude = x.abs().log10().floor() as i32;
    if !(-5..15).contains(&magnitude) {
        return format!("{:.*e}", (SIGNIFICANT_DIGITS - 1) as usize, x);
    }
    let decimals = (SIGNIFICANT_DIGITS - 1 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Column names; result columns follow the first row's `<coarse>_<preconditioner>` order.
pub fn header(rows: &[TableRow]) -> Vec<String> {
    let mut cols: Vec<String> = ["k", "n", "subdomains", "fine_nodes", "coarse_nodes"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    if let Some(first) = rows.first() {
        cols.extend(
            first
                .results
                .iter()
                .map(|r| format!("{}_{}", r.coarse.label(), r.preconditioner.label())),
        );
    }
    cols.extend(["kappa_h", "kappa_H", "seconds"].iter().map(|s| s.to_string()));
    cols
}

pub fn emit_csv<W: Write>(rows: &[TableRow], out: W) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::Config("no rows to write".into()));
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header(rows))?;
    for row in rows {
        let mut rec = vec![
            format_float(row.k),
            row.n.to_string(),
            row.subdomains.to_string(),
            row.fine_nodes.to_string(),
            row.coarse_nodes.to_string(),
        ];
        rec.extend(row.results.iter().map(|r| r.outcome.to_string()));
        rec.push(format_float(row.kappa_h));
        rec.push(format_float(row.kappa_coarse));
        rec.push(format_float(row.seconds));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes the table to `path`; nothing is created when `rows` is empty.
pub fn write_csv(rows: &[TableRow], path: impl AsRef<Path>) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::Config("no rows to write".into()));
    }
    emit_csv(rows, std::io::BufWriter::new(std::fs::File::create(path)?))
}
