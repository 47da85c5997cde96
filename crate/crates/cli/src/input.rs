use std::fs;
use std::path::{Path, PathBuf};

use htl_core::{Error, PowerSeries, Result, TensorOrder, C64};

/// Where a series came from, recorded in outputs.
pub fn source_label(spec: &str) -> String {
    if looks_inline(spec) {
        "inline".to_string()
    } else {
        spec.to_string()
    }
}

fn looks_inline(spec: &str) -> bool {
    spec.trim_start().starts_with('[')
}

/// Parses an inline JSON array, or reads one from the named file.
pub fn load_series(spec: &str) -> Result<PowerSeries> {
    if looks_inline(spec) {
        return spec.parse();
    }
    read_series_file(Path::new(spec))
}

pub fn read_series_file(path: &Path) -> Result<PowerSeries> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    text.parse()
        .map_err(|e: Error| Error::InvalidInput(format!("{}: {e}", path.display())))
}

/// Real coefficients only, as used by the search warm start.
pub fn load_real(spec: &str) -> Result<Vec<f64>> {
    let f = load_series(spec)?;
    if f.coeffs().iter().any(|c| c.im != 0.0) {
        return Err(Error::InvalidInput(
            "warm start must have real coefficients".into(),
        ));
    }
    Ok(f.coeffs().iter().map(|c| c.re).collect())
}

/// `*.json` files of a directory in name order.
pub fn batch_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let entries = fs::read_dir(dir).map_err(|e| {
        Error::InvalidInput(format!("cannot read directory {}: {e}", dir.display()))
    })?;
    let mut files = Vec::new();
    for entry in entries {
        let path = entry
            .map_err(|e| Error::InvalidInput(format!("cannot list {}: {e}", dir.display())))?
            .path();
        if path.is_file() && path.extension().is_some_and(|x| x == "json") {
            files.push(path);
        }
    }
    files.sort();
    if files.is_empty() {
        return Err(Error::InvalidInput(format!(
            "no .json files in {}",
            dir.display()
        )));
    }
    Ok(files)
}

/// `re`, `re,im`, or a JSON pair `[re, im]`.
pub fn parse_complex(s: &str) -> Result<C64> {
    let bad = || Error::InvalidInput(format!("cannot parse complex number {s:?}"));
    let trimmed = s.trim().trim_start_matches('[').trim_end_matches(']');
    let parts: Vec<&str> = trimmed.split(',').map(str::trim).collect();
    let num = |x: &str| {
        x.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(bad)
    };
    match parts.as_slice() {
        [re] => Ok(C64::new(num(re)?, 0.0)),
        [re, im] => Ok(C64::new(num(re)?, num(im)?)),
        _ => Err(bad()),
    }
}

pub fn order(m: u32) -> Result<TensorOrder> {
    TensorOrder::new(m)
}
