use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use htl_core::{Error, Result};
use serde_json::Value;

use crate::args::Format;

/// A command result in both output shapes.
pub struct Output {
    pub json: Value,
    pub csv_header: Vec<String>,
    pub csv_rows: Vec<Vec<String>>,
    /// Set when the run produced output but must exit with the anomaly code.
    pub anomaly: Option<String>,
}

impl Output {
    pub fn new<H: AsRef<str>>(json: Value, header: &[H], rows: Vec<Vec<String>>) -> Self {
        Self {
            json,
            csv_header: header.iter().map(|h| h.as_ref().to_string()).collect(),
            csv_rows: rows,
            anomaly: None,
        }
    }

    pub fn write(&self, format: Format, path: Option<&Path>) -> Result<()> {
        let sink: Box<dyn Write> = match path {
            Some(p) => Box::new(File::create(p).map_err(|e| io_error(p, e))?),
            None => Box::new(io::stdout().lock()),
        };
        let mut sink = BufWriter::new(sink);
        let label = path
            .map(|p| p.display().to_string())
            .unwrap_or_else(|| "stdout".into());
        let fail =
            |e: &dyn std::fmt::Display| Error::InvalidInput(format!("cannot write {label}: {e}"));
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut sink, &self.json).map_err(|e| fail(&e))?;
                sink.write_all(b"\n").map_err(|e| fail(&e))?;
            }
            Format::Csv => {
                write_csv(&mut sink, &self.csv_header, &self.csv_rows).map_err(|e| fail(&e))?
            }
        }
        sink.flush().map_err(|e| fail(&e))
    }
}

pub fn write_csv<W: Write, H: AsRef<str>>(
    sink: W,
    header: &[H],
    rows: &[Vec<String>],
) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(header.iter().map(AsRef::as_ref))?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv_file<H: AsRef<str>>(
    path: &Path,
    header: &[H],
    rows: &[Vec<String>],
) -> Result<()> {
    let file = File::create(path).map_err(|e| io_error(path, e))?;
    write_csv(BufWriter::new(file), header, rows)
        .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))
}

fn io_error(path: &Path, e: io::Error) -> Error {
    Error::InvalidInput(format!("cannot create {}: {e}", path.display()))
}

/// Shortest round-trip form used in CSV cells; non-finite values are spelled out.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        serde_json::to_string(&x).expect("finite floats serialize")
    } else {
        x.to_string()
    }
}
