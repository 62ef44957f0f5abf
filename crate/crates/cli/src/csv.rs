//! Grid export.

use std::io::{self, Write};

use weyl_core::ComplexValue;

pub const HEADER: &str = "index,x,t,re,im,magnitude";

/// One evaluated grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridRow {
    pub x: f64,
    pub t: f64,
    pub value: ComplexValue,
}

fn num(v: f64) -> String {
    // 17 significant digits round-trip every double
    format!("{v:.16e}")
}

pub fn write_csv<W: Write>(rows: &[GridRow], mut out: W) -> io::Result<()> {
    out.write_all(HEADER.as_bytes())?;
    out.write_all(b"\n")?;
    for (i, r) in rows.iter().enumerate() {
        writeln!(
            out,
            "{i},{},{},{},{},{}",
            num(r.x),
            num(r.t),
            num(r.value.re),
            num(r.value.im),
            num(r.value.norm())
        )?;
    }
    out.flush()
}

/// Inverse of [`write_csv`]; the magnitude column is recomputed, not read.
pub fn parse_csv(text: &str) -> Result<Vec<GridRow>, String> {
    let mut lines = text.split('\n');
    if lines.next() != Some(HEADER) {
        return Err("missing header".into());
    }
    let mut rows = Vec::new();
    for (i, line) in lines.filter(|l| !l.is_empty()).enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 || fields[0].parse::<usize>() != Ok(i) {
            return Err(format!("malformed row {i}: {line}"));
        }
        let f = |j: usize| fields[j].parse::<f64>().map_err(|e| format!("row {i}: {e}"));
        rows.push(GridRow {
            x: f(1)?,
            t: f(2)?,
            value: ComplexValue::new(f(3)?, f(4)?),
        });
    }
    Ok(rows)
}
