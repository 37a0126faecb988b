use std::io::{self, BufRead, Write};

use super::sampler::SampleStream;
use super::sgd::TraceRow;
use crate::config::Config;

pub const TRACE_HEADER: &str = "step,energy,stderr,acceptance";

/// Energy trace as CSV with a [`TRACE_HEADER`] line. Exact-mode rows have an
/// empty acceptance field.
pub fn write_trace_csv<W: Write>(out: &mut W, trace: &[TraceRow]) -> io::Result<()> {
    writeln!(out, "{TRACE_HEADER}")?;
    for r in trace {
        let acc = if r.acceptance.is_nan() { String::new() } else { format!("{}", r.acceptance) };
        writeln!(out, "{},{:.17e},{:.17e},{acc}", r.step, r.energy, r.stderr)?;
    }
    Ok(())
}

/// One bit string per line, chains in order.
pub fn write_samples<W: Write>(out: &mut W, stream: &SampleStream) -> io::Result<()> {
    for v in stream.iter() {
        writeln!(out, "{v}")?;
    }
    Ok(())
}

pub fn read_samples<R: BufRead>(input: R) -> io::Result<Vec<Config>> {
    input
        .lines()
        .filter(|l| l.as_ref().map_or(true, |l| !l.trim().is_empty()))
        .map(|l| {
            l?.trim()
                .parse()
                .map_err(|e: crate::error::Error| io::Error::new(io::ErrorKind::InvalidData, e.to_string()))
        })
        .collect()
}
