//! Command-line front end.
//!
//! Two ways to run:
//! * a sweep: `--mod qpsk --bits 2 --quantizer lloyd --antennas 100
//!   --users 10 --snr -10:1:15 --seed 42 --out run.csv`
//! * a preset: `--preset table2` or `--preset degradation`
//!
//! Exit codes: 0 success, 1 invalid usage/config, 2 I/O failure. The
//! `QMIMO_WORKERS` environment variable caps the worker-thread count
//! (default: all cores).

use std::path::PathBuf;

use clap::Parser;

use crate::error::Error;
use crate::harness::config::{AgcMode, SimConfig};
use crate::harness::csv::emit_csv;
use crate::harness::grid::parse_snr_grid;
use crate::harness::presets::{preset_degradation, preset_table2, write_sweep_plot_stub};
use crate::harness::sweep::run_ber_sweep;
use crate::quantizer::{QuantizerKind, Resolution};

/// Environment variable overriding the worker-thread count.
pub const WORKERS_ENV: &str = "QMIMO_WORKERS";

#[derive(Parser, Debug)]
#[command(
    name = "qmimo",
    version,
    about = "Monte Carlo + closed-form BER for coarsely quantized massive MIMO uplinks",
    after_help = "Examples:\n  \
        qmimo --mod qpsk --bits 2 --quantizer lloyd --antennas 100 --users 10 \\\n      \
        --snr -10:1:15 --seed 42 --out run.csv\n  \
        qmimo --preset table2\n  \
        qmimo --preset degradation --out-dir results/"
)]
struct Cli {
    /// Constellation: qpsk | 16qam | 64qam
    #[arg(long = "mod", value_name = "MOD")]
    modulation: Option<String>,
    /// ADC resolution: 1..8 bits, or "inf" for full precision
    #[arg(long, value_name = "BITS")]
    bits: Option<String>,
    /// Quantizer family: lloyd | uniform | none (none requires --bits inf)
    #[arg(long, value_name = "KIND")]
    quantizer: Option<String>,
    /// Base-station antenna count N
    #[arg(long, value_name = "N")]
    antennas: Option<usize>,
    /// Single-antenna user count K
    #[arg(long, value_name = "K")]
    users: Option<usize>,
    /// Eb/N0 grid in dB: "start:step:stop", "a,b,c", or a single value
    #[arg(long, value_name = "GRID", allow_hyphen_values = true)]
    snr: Option<String>,
    /// Master seed for the deterministic random-stream tree
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Output CSV path for a sweep
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Canned experiment: table2 | degradation
    #[arg(long, value_name = "NAME")]
    preset: Option<String>,
    /// Output directory for preset files
    #[arg(long = "out-dir", value_name = "DIR", default_value = ".")]
    out_dir: PathBuf,
    /// Symbol vectors per channel realization
    #[arg(long = "symbols-per-channel", default_value_t = 100)]
    symbols_per_channel: usize,
    /// Stop an SNR point after this many bit errors
    #[arg(long = "min-errors", default_value_t = 500)]
    min_errors: u64,
    /// ... or after this many bits, whichever comes first
    #[arg(long = "max-bits", default_value_t = 1_000_000_000)]
    max_bits: u64,
    /// Gain control before the quantizer: analytic | empirical
    #[arg(long, default_value = "analytic")]
    agc: String,
}

const FLAG_SUMMARY: &str = "valid flags: --mod qpsk|16qam|64qam, --bits 1..8|inf, \
--quantizer lloyd|uniform|none, --antennas N, --users K, --snr GRID, --seed S, \
--out FILE, --preset table2|degradation, --out-dir DIR, --symbols-per-channel S, \
--min-errors E, --max-bits B, --agc analytic|empirical";

/// Run the CLI on explicit arguments (first element is the program name)
/// and return the process exit code.
pub fn cli_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap handles --help/--version through the same path.
            let code = if e.exit_code() == 0 { 0 } else { 1 };
            let _ = e.print();
            return code;
        }
    };
    init_workers();
    match run(cli) {
        Ok(()) => 0,
        Err(Error::IoFailure(e)) => {
            eprintln!("error: I/O failure: {e}");
            2
        }
        Err(e) => {
            eprintln!("error: {e}");
            eprintln!("{FLAG_SUMMARY}");
            1
        }
    }
}

/// Apply `QMIMO_WORKERS` to the global thread pool. Silently keeps the
/// default when unset, and keeps an already-initialized pool as-is.
fn init_workers() {
    if let Ok(v) = std::env::var(WORKERS_ENV) {
        match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => eprintln!("warning: ignoring {WORKERS_ENV}={v:?} (want a positive integer)"),
        }
    }
}

fn run(cli: Cli) -> crate::error::Result<()> {
    if let Some(preset) = &cli.preset {
        let report = match preset.as_str() {
            "table2" => preset_table2(&cli.out_dir)?,
            "degradation" => preset_degradation(&cli.out_dir)?,
            other => {
                return Err(Error::UsageError(format!(
                    "unknown preset {other:?} (valid: table2, degradation)"
                )))
            }
        };
        println!("{report}");
        println!("files written to {}", cli.out_dir.display());
        return Ok(());
    }

    let cfg = build_config(&cli)?;
    for warning in cfg.validate()? {
        eprintln!("warning: {warning}");
    }
    let out = cli
        .out
        .clone()
        .ok_or_else(|| Error::UsageError("--out FILE is required for a sweep".into()))?;
    let curve = run_ber_sweep(&cfg)?;
    emit_csv(&curve, &out)?;
    let stub = write_sweep_plot_stub(&out)?;

    println!(
        "{:>8} {:>12} {:>12} {:>12} {:>11} {:>9}",
        "Eb/N0 dB", "ber_sim", "ber_full", "ber_twoterm", "bits", "errors"
    );
    for p in &curve.points {
        println!(
            "{:>8.2} {:>12.4e} {:>12.4e} {:>12.4e} {:>11} {:>8}{}",
            p.snr_db_per_bit,
            p.ber_numerical,
            p.ber_analytical_full,
            p.ber_analytical_twoterm,
            p.bits_sent,
            p.bit_errors,
            if p.saturated { "*" } else { "" }
        );
    }
    println!(
        "(* = bit budget hit before the error target)\nwrote {} and {}",
        out.display(),
        stub.display()
    );
    Ok(())
}

fn build_config(cli: &Cli) -> crate::error::Result<SimConfig> {
    let require = |name: &str, v: &Option<String>| -> crate::error::Result<String> {
        v.clone()
            .ok_or_else(|| Error::UsageError(format!("--{name} is required for a sweep")))
    };
    let m = match require("mod", &cli.modulation)?.to_lowercase().as_str() {
        "qpsk" | "4qam" | "4" => 4,
        "16qam" | "16" => 16,
        "64qam" | "64" => 64,
        other => {
            return Err(Error::UsageError(format!(
                "unknown modulation {other:?} (valid: qpsk, 16qam, 64qam)"
            )))
        }
    };
    let bits_raw = require("bits", &cli.bits)?;
    let resolution = match bits_raw.to_lowercase().as_str() {
        "inf" | "infinity" | "full" => Resolution::FullPrecision,
        num => Resolution::Bits(num.parse::<u8>().map_err(|_| {
            Error::UsageError(format!("--bits must be 1..8 or \"inf\", got {num:?}"))
        })?),
    };
    let quantizer_kind = match require("quantizer", &cli.quantizer)?.to_lowercase().as_str() {
        "lloyd" | "lloyd-max" | "lloyd_max" => Some(QuantizerKind::LloydMax),
        "uniform" => Some(QuantizerKind::Uniform),
        "none" => None,
        other => {
            return Err(Error::UsageError(format!(
                "unknown quantizer {other:?} (valid: lloyd, uniform, none)"
            )))
        }
    };
    let agc_mode = match cli.agc.to_lowercase().as_str() {
        "analytic" => AgcMode::Analytic,
        "empirical" => AgcMode::Empirical,
        other => {
            return Err(Error::UsageError(format!(
                "unknown agc mode {other:?} (valid: analytic, empirical)"
            )))
        }
    };
    let snr_grid_db = parse_snr_grid(&require("snr", &cli.snr)?)?;
    let n_antennas = cli
        .antennas
        .ok_or_else(|| Error::UsageError("--antennas is required for a sweep".into()))?;
    let k_users = cli
        .users
        .ok_or_else(|| Error::UsageError("--users is required for a sweep".into()))?;

    let cfg = SimConfig {
        m,
        n_antennas,
        k_users,
        resolution,
        quantizer_kind,
        snr_grid_db,
        symbols_per_channel: cli.symbols_per_channel,
        min_bit_errors: cli.min_errors,
        max_bits: cli.max_bits,
        master_seed: cli.seed,
        agc_mode,
    };
    cfg.validate()?;
    Ok(cfg)
}
