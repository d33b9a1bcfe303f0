//! SNR-grid parsing for the CLI: `start:step:stop` ranges, comma lists,
//! and single values, all in dB.

use crate::error::{Error, Result};

/// Largest number of grid points a single sweep will accept.
pub const MAX_GRID_POINTS: usize = 10_000;

/// Parse an SNR grid specification.
///
/// Accepted forms (values are E_b/N_0 in dB):
/// * `"start:step:stop"` — inclusive range with positive step, e.g.
///   `-10:1:15`;
/// * `"a,b,c"` — explicit comma-separated list;
/// * `"x"` — a single point.
pub fn parse_snr_grid(text: &str) -> Result<Vec<f64>> {
    let text = text.trim();
    if text.is_empty() {
        return Err(Error::UsageError("empty SNR grid specification".into()));
    }
    let parse_num = |tok: &str| -> Result<f64> {
        let v: f64 = tok.trim().parse().map_err(|_| {
            Error::UsageError(format!("invalid SNR value {:?} (expected dB number)", tok))
        })?;
        if !v.is_finite() {
            return Err(Error::UsageError(format!("non-finite SNR value {tok:?}")));
        }
        Ok(v)
    };
    let grid = if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::UsageError(format!(
                "range form must be start:step:stop, got {text:?}"
            )));
        }
        let (start, step, stop) = (
            parse_num(parts[0])?,
            parse_num(parts[1])?,
            parse_num(parts[2])?,
        );
        if step <= 0.0 {
            return Err(Error::UsageError(format!(
                "range step must be positive, got {step}"
            )));
        }
        if stop < start {
            return Err(Error::UsageError(format!(
                "range stop {stop} is below start {start}"
            )));
        }
        // Inclusive endpoint with a tolerance so e.g. -10:1:15 lands on 15
        // despite accumulated floating-point error.
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        if count > MAX_GRID_POINTS {
            return Err(Error::UsageError(format!(
                "range yields {count} points, above the {MAX_GRID_POINTS} cap"
            )));
        }
        (0..count).map(|i| start + i as f64 * step).collect()
    } else {
        text.split(',').map(parse_num).collect::<Result<Vec<_>>>()?
    };
    if grid.is_empty() {
        return Err(Error::UsageError("empty SNR grid specification".into()));
    }
    if grid.len() > MAX_GRID_POINTS {
        return Err(Error::UsageError(format!(
            "grid has {} points, above the {MAX_GRID_POINTS} cap",
            grid.len()
        )));
    }
    Ok(grid)
}
