//! CSV serialization for BER curves.
//!
//! The format is deterministic: comment lines record the producing
//! configuration and code version, floats are printed with 17 significant
//! digits (lossless for f64 round-trips), and two runs with the same seed
//! produce byte-identical files.

use std::io::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::harness::sweep::{BerCurve, BerPoint};

/// Column order of the data section, also used to check parsed files.
pub const COLUMNS: &str = "snr_db_per_bit,gamma0,gamma_q0,bits_sent,bit_errors,\
ber_numerical,ber_analytical_full,ber_analytical_twoterm,channel_draws,\
channel_redraws,saturated";

/// Render a curve to CSV text. `snr_db_per_bit` is E_b/N_0 per user in
/// dB; `gamma0 = (E_b/N_0)·log2 M` is the linear transmit SNR.
pub fn curve_to_csv_string(curve: &BerCurve) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "# {} v{} ber sweep\n",
        env!("CARGO_PKG_NAME"),
        env!("CARGO_PKG_VERSION")
    ));
    out.push_str(&format!("# config: {}\n", curve.config.summary()));
    out.push_str(
        "# snr_db_per_bit is Eb/N0 per user in dB; gamma0 = Eb/N0 * log2(M) linear\n",
    );
    out.push_str(COLUMNS);
    out.push('\n');
    for p in &curve.points {
        out.push_str(&format!(
            "{:.16e},{:.16e},{:.16e},{},{},{:.16e},{:.16e},{:.16e},{},{},{}\n",
            p.snr_db_per_bit,
            p.gamma0,
            p.gamma_q0,
            p.bits_sent,
            p.bit_errors,
            p.ber_numerical,
            p.ber_analytical_full,
            p.ber_analytical_twoterm,
            p.channel_draws,
            p.channel_redraws,
            u8::from(p.saturated),
        ));
    }
    out
}

/// Write a curve to `path` as CSV.
pub fn emit_csv(curve: &BerCurve, path: &Path) -> Result<()> {
    let mut file = std::fs::File::create(path)?;
    file.write_all(curve_to_csv_string(curve).as_bytes())?;
    Ok(())
}

/// Parse the data section of a CSV file produced by [`emit_csv`].
/// Comment lines are skipped; the column header must match exactly.
pub fn parse_csv_points(text: &str) -> Result<Vec<BerPoint>> {
    let mut lines = text.lines().filter(|l| !l.trim_start().starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| Error::ParseError("missing column header".into()))?;
    if header.trim() != COLUMNS {
        return Err(Error::ParseError(format!(
            "unexpected column header {header:?}"
        )));
    }
    let mut points = Vec::new();
    for (idx, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 11 {
            return Err(Error::ParseError(format!(
                "row {}: expected 11 fields, got {}",
                idx + 1,
                fields.len()
            )));
        }
        let f = |i: usize| -> Result<f64> {
            fields[i]
                .trim()
                .parse()
                .map_err(|e| Error::ParseError(format!("row {}: bad float: {e}", idx + 1)))
        };
        let u = |i: usize| -> Result<u64> {
            fields[i]
                .trim()
                .parse()
                .map_err(|e| Error::ParseError(format!("row {}: bad count: {e}", idx + 1)))
        };
        let saturated = match fields[10].trim() {
            "0" => false,
            "1" => true,
            other => {
                return Err(Error::ParseError(format!(
                    "row {}: saturated flag must be 0 or 1, got {other:?}",
                    idx + 1
                )))
            }
        };
        points.push(BerPoint {
            snr_db_per_bit: f(0)?,
            gamma0: f(1)?,
            gamma_q0: f(2)?,
            bits_sent: u(3)?,
            bit_errors: u(4)?,
            ber_numerical: f(5)?,
            ber_analytical_full: f(6)?,
            ber_analytical_twoterm: f(7)?,
            channel_draws: u(8)?,
            channel_redraws: u(9)?,
            saturated,
        });
    }
    Ok(points)
}
