//! Monte Carlo engine and experiment front end: simulation configs, SNR
//! sweeps with deterministic parallel trials, CSV emission, canned
//! experiment presets, and the command-line interface.

pub mod cli;
pub mod config;
pub mod csv;
pub mod grid;
pub mod presets;
pub mod sweep;

pub use config::{AgcMode, SimConfig};
pub use csv::{curve_to_csv_string, emit_csv, parse_csv_points};
pub use grid::parse_snr_grid;
pub use presets::{preset_degradation, preset_table2};
pub use sweep::{run_ber_sweep, run_trial, BerCurve, BerPoint, TrialOutcome};
