//! Trace CSV emission.
//!
//! Schema: header `iter,vf_evals,method,distance`, one row per recorded
//! iteration, rows grouped by series in the order given and ordered by
//! iteration within a series. Distances are written in scientific notation
//! with 17 significant digits.

use std::io::{self, Write};

use crate::methods::RunTrace;

/// A labeled trace; the label is what lands in the CSV `method` column
/// (e.g. `egm_optimal` vs plain `egm`).
pub struct LabeledTrace<'a> {
    pub label: String,
    pub trace: &'a RunTrace,
}

pub fn write_csv<W: Write>(mut out: W, series: &[LabeledTrace<'_>]) -> io::Result<()> {
    writeln!(out, "iter,vf_evals,method,distance")?;
    for s in series {
        for (t, (dist, evals)) in s
            .trace
            .distances
            .iter()
            .zip(&s.trace.vf_evals)
            .enumerate()
        {
            writeln!(out, "{t},{evals},{},{dist:.16e}", s.label)?;
        }
    }
    Ok(())
}

pub fn csv_string(series: &[LabeledTrace<'_>]) -> String {
    let mut buf = Vec::new();
    write_csv(&mut buf, series).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("csv output is ascii")
}
