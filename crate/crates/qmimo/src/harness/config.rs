//! Simulation configuration and its validation rules.

use crate::error::{Error, Result};
use crate::quantizer::{QuantizerKind, Resolution};

/// How the receive gain control chooses the per-component scale handed to
/// the quantizer.
///
/// * `Analytic`: per-antenna scale from the known channel row power,
///   `σ_i = √((σ_x²·Σ_k|h_ik|² + σ_n²)/2)`.
/// * `Empirical`: per-antenna RMS measured from the received block itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AgcMode {
    Analytic,
    Empirical,
}

impl std::fmt::Display for AgcMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AgcMode::Analytic => write!(f, "analytic"),
            AgcMode::Empirical => write!(f, "empirical"),
        }
    }
}

/// Full description of one Monte Carlo BER sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    /// Constellation size: 4, 16, or 64.
    pub m: usize,
    pub n_antennas: usize,
    pub k_users: usize,
    /// ADC resolution; `FullPrecision` turns the quantizer stage off.
    pub resolution: Resolution,
    /// Quantizer family; `None` exactly when resolution is full precision.
    pub quantizer_kind: Option<QuantizerKind>,
    /// E_b/N_0 values per user in dB (converted internally through
    /// `γ_0 = (E_b/N_0)·log2 M` with `σ_x² = 1`).
    pub snr_grid_db: Vec<f64>,
    /// Symbol vectors pushed through each channel realization.
    pub symbols_per_channel: usize,
    /// Stop an SNR point once this many bit errors have accumulated…
    pub min_bit_errors: u64,
    /// …or once this many bits have been sent, whichever comes first.
    pub max_bits: u64,
    pub master_seed: u64,
    pub agc_mode: AgcMode,
}

impl SimConfig {
    /// Baseline configuration used by tests and as the CLI default:
    /// half the fields are the published experiment setup (N=100, K=10),
    /// the rest are engine defaults.
    pub fn new(m: usize, resolution: Resolution, quantizer_kind: Option<QuantizerKind>) -> Self {
        SimConfig {
            m,
            n_antennas: 100,
            k_users: 10,
            resolution,
            quantizer_kind,
            snr_grid_db: vec![0.0],
            symbols_per_channel: 100,
            min_bit_errors: 500,
            max_bits: 1_000_000_000,
            master_seed: 42,
            agc_mode: AgcMode::Analytic,
        }
    }

    /// Check every structural invariant. Returns advisory warnings (the
    /// config is still runnable) or an error (it is not).
    pub fn validate(&self) -> Result<Vec<String>> {
        if !matches!(self.m, 4 | 16 | 64) {
            return Err(Error::UsageError(format!(
                "constellation size must be 4, 16, or 64, got {}",
                self.m
            )));
        }
        if self.k_users < 1 || self.n_antennas < self.k_users {
            return Err(Error::UsageError(format!(
                "need antennas >= users >= 1, got N={}, K={}",
                self.n_antennas, self.k_users
            )));
        }
        match (self.resolution, self.quantizer_kind) {
            (Resolution::FullPrecision, None) => {}
            (Resolution::FullPrecision, Some(k)) => {
                return Err(Error::UsageError(format!(
                    "quantizer '{k}' conflicts with full precision; use quantizer 'none'"
                )));
            }
            (Resolution::Bits(_), None) => {
                return Err(Error::UsageError(
                    "quantizer 'none' requires full precision (bits = inf)".into(),
                ));
            }
            (Resolution::Bits(b), Some(_)) if !(1..=8).contains(&b) => {
                return Err(Error::UsageError(format!(
                    "resolution must be 1..=8 bits or inf, got {b}"
                )));
            }
            (Resolution::Bits(_), Some(_)) => {}
        }
        if self.snr_grid_db.is_empty() {
            return Err(Error::UsageError("SNR grid must not be empty".into()));
        }
        if let Some(bad) = self.snr_grid_db.iter().find(|v| !v.is_finite()) {
            return Err(Error::UsageError(format!(
                "SNR grid contains a non-finite value: {bad}"
            )));
        }
        if self.symbols_per_channel == 0 {
            return Err(Error::UsageError(
                "symbols_per_channel must be at least 1".into(),
            ));
        }
        if self.max_bits == 0 {
            return Err(Error::UsageError("max_bits must be at least 1".into()));
        }
        if self.min_bit_errors == 0 {
            return Err(Error::UsageError(
                "min_bit_errors must be at least 1".into(),
            ));
        }
        let mut warnings = Vec::new();
        if self.min_bit_errors < 100 {
            warnings.push(format!(
                "min_bit_errors = {} is below the recommended 100; \
                 confidence intervals will be wide",
                self.min_bit_errors
            ));
        }
        Ok(warnings)
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.m.trailing_zeros() as usize
    }

    /// Transmit SNR `γ_0` for a grid point: `(E_b/N_0)·log2 M` in linear
    /// scale, with `σ_x² = 1`.
    pub fn gamma0_at(&self, snr_db_per_bit: f64) -> f64 {
        10f64.powf(snr_db_per_bit / 10.0) * self.bits_per_symbol() as f64
    }

    /// Link parameters at a grid point (`σ_x² = 1`, `σ_n² = 1/γ_0`).
    pub fn link_params_at(&self, snr_db_per_bit: f64) -> crate::channel::LinkParams {
        crate::channel::LinkParams::new(
            self.n_antennas,
            self.k_users,
            1.0,
            1.0 / self.gamma0_at(snr_db_per_bit),
        )
    }

    /// One-line rendering of every field, used in CSV comment headers.
    /// Deterministic: equal configs render to equal strings.
    pub fn summary(&self) -> String {
        let quantizer = match self.quantizer_kind {
            Some(k) => k.to_string(),
            None => "none".into(),
        };
        let grid = self
            .snr_grid_db
            .iter()
            .map(|v| format!("{v:.16e}"))
            .collect::<Vec<_>>()
            .join(",");
        format!(
            "m={} antennas={} users={} bits={} quantizer={} snr_db=[{}] \
             symbols_per_channel={} min_bit_errors={} max_bits={} seed={} agc={}",
            self.m,
            self.n_antennas,
            self.k_users,
            self.resolution,
            quantizer,
            grid,
            self.symbols_per_channel,
            self.min_bit_errors,
            self.max_bits,
            self.master_seed,
            self.agc_mode
        )
    }
}
