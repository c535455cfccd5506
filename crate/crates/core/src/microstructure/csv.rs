//! CSV ingestion for metrology data.
//!
//! All readers demand an exact header row (units are encoded in the column
//! names), accept `#` comment lines, and report the line number of the first
//! offending record on failure.

use std::io;

use super::discriminate::{SplitSample, SplitSeries};
use super::MicrostructureError;
use crate::units::{Dim, Quantity};

pub const CURVATURE_HEADER: [&str; 2] = ["s_m", "kappa_per_m"];
pub const HEIGHT_HEADER: [&str; 2] = ["s_m", "h_m"];
pub const SPLIT_SERIES_HEADER: [&str; 6] =
    ["mu2_per_m2", "mu2_sigma", "rrms_m", "rrms_sigma", "T1_s", "T1_sigma"];

fn reader<R: io::Read>(source: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(source)
}

fn check_header<R: io::Read>(
    rdr: &mut csv::Reader<R>,
    expected: &[&str],
) -> Result<(), MicrostructureError> {
    let headers = rdr
        .headers()
        .map_err(|e| MicrostructureError::Csv(format!("cannot read header: {e}")))?;
    let got: Vec<&str> = headers.iter().collect();
    if got != expected {
        return Err(MicrostructureError::Csv(format!(
            "header mismatch: expected {expected:?}, got {got:?}"
        )));
    }
    Ok(())
}

fn parse_field(field: &str, name: &str, line: u64) -> Result<f64, MicrostructureError> {
    field.parse::<f64>().map_err(|_| {
        MicrostructureError::Csv(format!("line {line}: cannot parse {name} value {field:?}"))
    })
}

fn read_two_column<R: io::Read>(
    source: R,
    expected: &[&str; 2],
) -> Result<Vec<(f64, f64)>, MicrostructureError> {
    let mut rdr = reader(source);
    check_header(&mut rdr, expected)?;
    let mut out = Vec::new();
    for result in rdr.records() {
        let record =
            result.map_err(|e| MicrostructureError::Csv(format!("bad record: {e}")))?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if record.len() != 2 {
            return Err(MicrostructureError::Csv(format!(
                "line {line}: expected 2 fields, got {}",
                record.len()
            )));
        }
        let a = parse_field(&record[0], expected[0], line)?;
        let b = parse_field(&record[1], expected[1], line)?;
        out.push((a, b));
    }
    Ok(out)
}

/// Read `(s, kappa)` samples from a `s_m,kappa_per_m` file.
pub fn read_curvature_samples<R: io::Read>(
    source: R,
) -> Result<Vec<(f64, f64)>, MicrostructureError> {
    read_two_column(source, &CURVATURE_HEADER)
}

/// Read `(s, h)` samples from a `s_m,h_m` file.
pub fn read_height_samples<R: io::Read>(
    source: R,
) -> Result<Vec<(f64, f64)>, MicrostructureError> {
    read_two_column(source, &HEIGHT_HEADER)
}

/// Read a split-series table
/// (`mu2_per_m2,mu2_sigma,rrms_m,rrms_sigma,T1_s,T1_sigma`).
pub fn read_split_series<R: io::Read>(source: R) -> Result<SplitSeries, MicrostructureError> {
    let mut rdr = reader(source);
    check_header(&mut rdr, &SPLIT_SERIES_HEADER)?;
    let mut rows = Vec::new();
    for result in rdr.records() {
        let record =
            result.map_err(|e| MicrostructureError::Csv(format!("bad record: {e}")))?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if record.len() != 6 {
            return Err(MicrostructureError::Csv(format!(
                "line {line}: expected 6 fields, got {}",
                record.len()
            )));
        }
        let mut values = [0.0; 6];
        for (i, v) in values.iter_mut().enumerate() {
            *v = parse_field(&record[i], SPLIT_SERIES_HEADER[i], line)?;
        }
        let quantity = |value: f64, sigma: f64, dim: Dim| {
            Quantity::new(value, sigma, dim).map_err(|e| {
                MicrostructureError::Csv(format!("line {line}: {e}"))
            })
        };
        rows.push(SplitSample {
            mu2: quantity(values[0], values[1], Dim::LENGTH.powi(-2))?,
            r_rms: quantity(values[2], values[3], Dim::LENGTH)?,
            t1: quantity(values[4], values[5], Dim::TIME)?,
            mu1: None,
        });
    }
    SplitSeries::new(rows)
}
