//! Per-strobe record of the timing loop and its CSV form.

use std::fmt::Write as _;
use std::io::Read;
use std::path::Path;

use serde::Deserialize;

use crate::error::{invalid, io_err, Error, Result};
use crate::fmt_sig;

pub const CSV_HEADER: &str = "cycle,basepoint,mu,ted_error,loop_out";

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
pub struct TraceEntry {
    #[serde(rename = "cycle")]
    pub cycle_index: u64,
    #[serde(rename = "basepoint")]
    pub basepoint_index: u64,
    pub mu: f64,
    pub ted_error: f64,
    pub loop_out: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct FractionalIntervalTrace {
    entries: Vec<TraceEntry>,
    loop_samples_per_symbol: usize,
}

impl FractionalIntervalTrace {
    pub fn new(loop_samples_per_symbol: usize) -> Self {
        Self {
            entries: Vec::new(),
            loop_samples_per_symbol,
        }
    }

    /// Builds a trace, checking `mu ∈ [0, 1)` and strictly increasing base points.
    pub fn from_entries(entries: Vec<TraceEntry>, loop_samples_per_symbol: usize) -> Result<Self> {
        if loop_samples_per_symbol == 0 {
            return Err(invalid("loop_samples_per_symbol", "must be at least 1"));
        }
        let mut trace = Self::new(loop_samples_per_symbol);
        for e in entries {
            trace.push(e)?;
        }
        Ok(trace)
    }

    pub fn push(&mut self, entry: TraceEntry) -> Result<()> {
        if !(0.0..1.0).contains(&entry.mu) {
            return Err(invalid(
                "trace mu",
                format!("{} is outside [0, 1)", entry.mu),
            ));
        }
        if let Some(last) = self.entries.last() {
            if entry.basepoint_index <= last.basepoint_index {
                return Err(invalid(
                    "trace basepoint",
                    format!(
                        "{} does not follow {}",
                        entry.basepoint_index, last.basepoint_index
                    ),
                ));
            }
        }
        self.entries.push(entry);
        Ok(())
    }

    pub fn entries(&self) -> &[TraceEntry] {
        &self.entries
    }

    pub fn loop_samples_per_symbol(&self) -> usize {
        self.loop_samples_per_symbol
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn mu(&self) -> impl Iterator<Item = f64> + '_ {
        self.entries.iter().map(|e| e.mu)
    }

    /// Drops the first `n` entries.
    pub fn skip(&self, n: usize) -> Self {
        Self {
            entries: self.entries.iter().skip(n).copied().collect(),
            loop_samples_per_symbol: self.loop_samples_per_symbol,
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * (self.entries.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for e in &self.entries {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                e.cycle_index,
                e.basepoint_index,
                fmt_sig(e.mu, 12),
                fmt_sig(e.ted_error, 12),
                fmt_sig(e.loop_out, 12)
            );
        }
        out
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_csv()).map_err(io_err(path))
    }

    pub fn from_csv_reader(reader: impl Read, loop_samples_per_symbol: usize) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(reader);
        let header = rdr
            .headers()
            .map_err(|e| invalid("trace csv", e.to_string()))?
            .iter()
            .collect::<Vec<_>>()
            .join(",");
        if header != CSV_HEADER {
            return Err(invalid(
                "trace csv",
                format!("unexpected header '{header}'"),
            ));
        }
        let entries = rdr
            .deserialize()
            .collect::<Result<Vec<TraceEntry>, _>>()
            .map_err(|e| invalid("trace csv", e.to_string()))?;
        Self::from_entries(entries, loop_samples_per_symbol)
    }

    pub fn read_csv(path: impl AsRef<Path>, loop_samples_per_symbol: usize) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(io_err(path))?;
        Self::from_csv_reader(file, loop_samples_per_symbol).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            reason: e.to_string(),
        })
    }
}
