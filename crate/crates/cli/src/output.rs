//! Bit-stable CSV and JSON emission.
//!
//! Files are written atomically (temp file in the same directory, then
//! rename) and deterministically: fixed 12-significant-digit scientific
//! notation, `.` decimal point, LF line endings. Identical inputs produce
//! byte-identical files.

use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use inedor::oracle::EmpiricalDensity;
use inedor::spectrum::SpectrumResult;

use crate::CliError;

/// 12 significant digits, scientific notation.
pub fn fmt12(x: f64) -> String {
    format!("{x:.11e}")
}

pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let tmp = path.with_extension("tmp");
    let io = |e: std::io::Error| CliError::Io(format!("writing {}: {e}", path.display()));
    let mut file = fs::File::create(&tmp).map_err(io)?;
    file.write_all(bytes).map_err(io)?;
    file.sync_all().map_err(io)?;
    drop(file);
    fs::rename(&tmp, path).map_err(io)?;
    Ok(())
}

/// Spectrum CSV: `sweep_offset_hz,amplitude_arb`, one row per sample,
/// amplitudes normalized to the far-wing baseline.
pub fn spectrum_csv(result: &SpectrumResult) -> String {
    let mut out = String::from("sweep_offset_hz,amplitude_arb\n");
    for (offset, amplitude) in result.normalized() {
        out.push_str(&fmt12(offset / (2.0 * PI)));
        out.push(',');
        out.push_str(&fmt12(amplitude));
        out.push('\n');
    }
    out
}

pub fn write_spectrum_csv(result: &SpectrumResult, path: &Path) -> Result<(), CliError> {
    atomic_write(path, spectrum_csv(result).as_bytes())
}

/// Bounds CSV: field offset plus the two probe-frequency bounds as
/// offsets from the zero-density line, in Hz.
pub fn bounds_csv(rows: &[(f64, f64, f64)]) -> String {
    let mut out = String::from("h_gauss,lower_offset_hz,upper_offset_hz\n");
    for &(h, lower, upper) in rows {
        out.push_str(&fmt12(h));
        out.push(',');
        out.push_str(&fmt12(lower / (2.0 * PI)));
        out.push(',');
        out.push_str(&fmt12(upper / (2.0 * PI)));
        out.push('\n');
    }
    out
}

/// Oracle CSV: per-bin empirical and analytic masses.
pub fn oracle_csv(emp: &EmpiricalDensity, analytic: &[f64]) -> String {
    let mut out = String::from("x_lo,x_hi,empirical,analytic\n");
    for (k, w) in emp.weights.iter().enumerate() {
        out.push_str(&fmt12(emp.bin_edges[k]));
        out.push(',');
        out.push_str(&fmt12(emp.bin_edges[k + 1]));
        out.push(',');
        out.push_str(&fmt12(*w));
        out.push(',');
        out.push_str(&fmt12(analytic[k]));
        out.push('\n');
    }
    out
}

/// Scan CSV: scanned parameter value and measured width.
pub fn scan_csv(samples: &[(f64, f64)]) -> String {
    let mut out = String::from("value,width_hz\n");
    for &(value, width) in samples {
        out.push_str(&fmt12(value));
        out.push(',');
        out.push_str(&fmt12(width));
        out.push('\n');
    }
    out
}

/// Summary report; key order is fixed by declaration order.
#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    #[serde(rename = "delta_H_c_gauss")]
    pub delta_h_c_gauss: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_star_gauss: Option<f64>,
    pub width_drive_hz: f64,
    pub width_probe_hz: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_to_min_hz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub baseline: Option<f64>,
    pub warnings: Vec<String>,
}

pub fn summary_json(summary: &Summary) -> String {
    let mut text = serde_json::to_string_pretty(summary).expect("summary serializes");
    text.push('\n');
    text
}

pub fn write_summary_json(summary: &Summary, path: &Path) -> Result<(), CliError> {
    atomic_write(path, summary_json(summary).as_bytes())
}
