//! Canned experiments: the high-SNR BER-floor table and the
//! SNR-degradation study, each emitting a CSV next to a human-readable
//! report, plus generated plotting-script stubs (plotting stays
//! out-of-process; the core emits data only).

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::analytics::{ber_degradation, ber_floor};
use crate::error::Result;
use crate::harness::config::SimConfig;
use crate::harness::sweep::run_ber_sweep;
use crate::quantizer::{aqnm_params, QuantizerKind, Resolution};

const FLOOR_MODULATIONS: [(usize, &str); 3] = [(4, "qpsk"), (16, "16qam"), (64, "64qam")];
const FLOOR_SNR_DB: f64 = 100.0;
/// Error target for floor cells large enough to measure.
const FLOOR_MIN_ERRORS: u64 = 400;
/// Bit cap for measurable cells (safety margin over the expected need).
const FLOOR_MAX_BITS: u64 = 40_000_000;
/// Bit budget spent demonstrating that a deep floor yields no errors.
const FLOOR_ZERO_BUDGET: u64 = 2_000_000;
/// Floors below this are reported as "0 observed" under the budget
/// rather than chased with Monte Carlo.
const FLOOR_MEASURABLE: f64 = 1e-6;

/// High-SNR BER floors for every (modulation, resolution) pair at N=100,
/// K=10: the closed-form floor for all 12 cells, plus a Monte Carlo floor
/// at 100 dB E_b/N_0 (Lloyd–Max front end) where the floor is large
/// enough to observe. Writes `table2.csv` and a plotting stub to
/// `out_dir`; returns the report text.
pub fn preset_table2(out_dir: &Path) -> Result<String> {
    let mut report = String::from(
        "BER floors at N=100, K=10 (Lloyd-Max front end, Monte Carlo at 100 dB Eb/N0)\n\n",
    );
    let mut csv = String::from(
        "modulation,bits,floor_analytical,bits_sent,bit_errors,ber_numerical\n",
    );
    writeln!(
        report,
        "{:<10} {:>4} {:>14} {:>16} {:>12} {:>10}",
        "modulation", "bits", "analytical", "numerical", "bits_sent", "errors"
    )
    .unwrap();
    for &(m, name) in &FLOOR_MODULATIONS {
        for b in 1..=4u8 {
            let analytical = ber_floor(m, 100, 10, &aqnm_params(Resolution::Bits(b)))?;
            let measurable = analytical >= FLOOR_MEASURABLE;
            let mut cfg = SimConfig::new(m, Resolution::Bits(b), Some(QuantizerKind::LloydMax));
            cfg.snr_grid_db = vec![FLOOR_SNR_DB];
            if measurable {
                cfg.min_bit_errors = FLOOR_MIN_ERRORS;
                cfg.max_bits = FLOOR_MAX_BITS;
            } else {
                // Run the budget out; the point is the absence of errors.
                cfg.min_bit_errors = u64::MAX / 2;
                cfg.max_bits = FLOOR_ZERO_BUDGET;
            }
            let point = run_ber_sweep(&cfg)?.points.remove(0);
            let numerical = if point.bit_errors > 0 {
                format!("{:.3e}", point.ber_numerical)
            } else {
                format!("0 observed/{:.1e} bits", point.bits_sent as f64)
            };
            writeln!(
                report,
                "{:<10} {:>4} {:>14.4e} {:>16} {:>12} {:>10}",
                name, b, analytical, numerical, point.bits_sent, point.bit_errors
            )
            .unwrap();
            writeln!(
                csv,
                "{},{},{:.16e},{},{},{:.16e}",
                name, b, analytical, point.bits_sent, point.bit_errors, point.ber_numerical
            )
            .unwrap();
        }
    }
    report.push_str(
        "\nCells shown as '0 observed' have closed-form floors far below the spent\n\
         bit budget's resolution; their true values are the analytical column.\n",
    );
    std::fs::write(out_dir.join("table2.csv"), &csv)?;
    write_floor_plot_stub(out_dir)?;
    Ok(report)
}

/// SNR degradation (dB) versus resolution at target BER 1e-4, K=10, for
/// QPSK and 16-QAM and N in {100, 200, 400}. Pure closed-form; writes
/// `degradation.csv` and a plotting stub to `out_dir`; returns the report
/// text.
pub fn preset_degradation(out_dir: &Path) -> Result<String> {
    let target = 1e-4;
    let mut report = format!(
        "SNR degradation vs full precision at target BER {target:.0e}, K=10\n\n"
    );
    let mut csv = String::from(
        "modulation,bits,antennas,users,target_ber,degradation_db,reachable\n",
    );
    writeln!(
        report,
        "{:<10} {:>4} {:>8} {:>16}",
        "modulation", "bits", "antennas", "degradation_db"
    )
    .unwrap();
    for &(m, name) in &FLOOR_MODULATIONS[..2] {
        for b in 1..=4u8 {
            for n in [100usize, 200, 400] {
                match ber_degradation(m, n, 10, Resolution::Bits(b), target) {
                    Ok(db) => {
                        writeln!(report, "{name:<10} {b:>4} {n:>8} {db:>16.3}").unwrap();
                        writeln!(csv, "{name},{b},{n},10,{target:e},{db:.16e},1").unwrap();
                    }
                    Err(crate::error::Error::Unreachable { floor, .. }) => {
                        writeln!(
                            report,
                            "{name:<10} {b:>4} {n:>8} {:>16}",
                            format!("unreachable (floor {floor:.1e})")
                        )
                        .unwrap();
                        writeln!(csv, "{name},{b},{n},10,{target:e},,0").unwrap();
                    }
                    Err(other) => return Err(other),
                }
            }
        }
    }
    report.push_str(
        "\nUnreachable rows: the closed-form BER floor for that resolution sits at\n\
         or above the target, so no transmit power reaches it.\n",
    );
    std::fs::write(out_dir.join("degradation.csv"), &csv)?;
    write_degradation_plot_stub(out_dir)?;
    Ok(report)
}

/// Write a matplotlib stub that plots a sweep CSV produced by
/// [`crate::harness::emit_csv`], named `plot_<csv-stem>.py` beside it.
pub fn write_sweep_plot_stub(csv_path: &Path) -> Result<PathBuf> {
    let stem = csv_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "sweep".into());
    let file_name = csv_path
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "sweep.csv".into());
    let script = format!(
        r##"#!/usr/bin/env python3
"""Plot the BER sweep in {file_name} (generated stub; edit freely)."""
import csv

import matplotlib.pyplot as plt

snr, num, full, two = [], [], [], []
with open("{file_name}") as fh:
    rows = (r for r in fh if not r.startswith("#"))
    for row in csv.DictReader(rows):
        snr.append(float(row["snr_db_per_bit"]))
        num.append(float(row["ber_numerical"]))
        full.append(float(row["ber_analytical_full"]))
        two.append(float(row["ber_analytical_twoterm"]))

fig, ax = plt.subplots()
ax.semilogy(snr, num, "o", label="simulated")
ax.semilogy(snr, full, "-", label="closed form (full)")
ax.semilogy(snr, two, "--", label="closed form (two-term)")
ax.set_xlabel("Eb/N0 per user [dB]")
ax.set_ylabel("BER")
ax.grid(True, which="both", alpha=0.3)
ax.legend()
fig.savefig("{stem}.png", dpi=150, bbox_inches="tight")
print("wrote {stem}.png")
"##
    );
    let path = csv_path.with_file_name(format!("plot_{stem}.py"));
    std::fs::write(&path, script)?;
    Ok(path)
}

fn write_floor_plot_stub(out_dir: &Path) -> Result<()> {
    let script = r#"#!/usr/bin/env python3
"""Bar chart of analytical vs simulated BER floors from table2.csv."""
import csv

import matplotlib.pyplot as plt

labels, analytical, numerical = [], [], []
with open("table2.csv") as fh:
    for row in csv.DictReader(fh):
        labels.append(f'{row["modulation"]}/b={row["bits"]}')
        analytical.append(float(row["floor_analytical"]))
        ber = float(row["ber_numerical"])
        numerical.append(ber if int(row["bit_errors"]) > 0 else None)

fig, ax = plt.subplots(figsize=(9, 4))
xs = range(len(labels))
ax.bar(xs, analytical, width=0.4, label="analytical floor")
pts = [(x, v) for x, v in zip(xs, numerical) if v is not None]
if pts:
    ax.plot(*zip(*pts), "k_", markersize=14, label="simulated (100 dB)")
ax.set_yscale("log")
ax.set_xticks(list(xs), labels, rotation=45, ha="right")
ax.set_ylabel("BER floor")
ax.legend()
fig.savefig("table2.png", dpi=150, bbox_inches="tight")
print("wrote table2.png")
"#;
    std::fs::write(out_dir.join("plot_table2.py"), script)?;
    Ok(())
}

fn write_degradation_plot_stub(out_dir: &Path) -> Result<()> {
    let script = r#"#!/usr/bin/env python3
"""SNR degradation vs resolution from degradation.csv."""
import csv
from collections import defaultdict

import matplotlib.pyplot as plt

series = defaultdict(list)
with open("degradation.csv") as fh:
    for row in csv.DictReader(fh):
        if row["reachable"] == "1":
            key = (row["modulation"], row["antennas"])
            series[key].append((int(row["bits"]), float(row["degradation_db"])))

fig, ax = plt.subplots()
for (mod_name, n), pts in sorted(series.items()):
    pts.sort()
    ax.plot(*zip(*pts), "o-", label=f"{mod_name}, N={n}")
ax.set_xlabel("ADC resolution [bits]")
ax.set_ylabel("SNR degradation [dB]")
ax.set_xticks([1, 2, 3, 4])
ax.grid(True, alpha=0.3)
ax.legend()
fig.savefig("degradation.png", dpi=150, bbox_inches="tight")
print("wrote degradation.png")
"#;
    std::fs::write(out_dir.join("plot_degradation.py"), script)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degradation_preset_report_and_csv() {
        let dir = tempfile::tempdir().unwrap();
        let report = preset_degradation(dir.path()).unwrap();
        // Known landmark values appear in the report.
        assert!(report.contains("1.571"), "report:\n{report}");
        assert!(report.contains("unreachable"), "report:\n{report}");
        let csv = std::fs::read_to_string(dir.path().join("degradation.csv")).unwrap();
        // 2 modulations x 4 resolutions x 3 antenna counts = 24 data rows.
        assert_eq!(csv.lines().count(), 25);
        assert!(csv.lines().any(|l| l.starts_with("qpsk,2,100,10,1e-4,1.57")));
        assert!(csv.contains("16qam,1,100,10,1e-4,,0"));
        assert!(dir.path().join("plot_degradation.py").exists());
    }

    #[test]
    fn sweep_plot_stub_lands_next_to_csv() {
        let dir = tempfile::tempdir().unwrap();
        let csv = dir.path().join("myrun.csv");
        std::fs::write(&csv, "x").unwrap();
        let stub = write_sweep_plot_stub(&csv).unwrap();
        assert_eq!(stub, dir.path().join("plot_myrun.py"));
        let text = std::fs::read_to_string(stub).unwrap();
        assert!(text.contains("myrun.csv"));
    }
}
