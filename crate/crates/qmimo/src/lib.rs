//! Link-level simulator and closed-form BER analytics for uplink massive
//! MIMO receivers with coarse (1–8 bit) ADC quantization and zero-forcing
//! detection.
//!
//! The crate answers one question two independent ways and lets you compare
//! them: what does coarse per-antenna quantization cost in uncoded bit error
//! rate?
//!
//! * [`analytics`] evaluates a closed-form BER approximation built on an
//!   additive-quantization-noise (Bussgang) model of the quantizer, including
//!   high-SNR BER floors and SNR-degradation solving.
//! * [`harness`] runs the true nonlinear chain by Monte Carlo — Gray-mapped
//!   M-QAM over an i.i.d. Rayleigh channel, per-antenna scalar quantization
//!   (uniform or Lloyd–Max), zero-forcing detection — with deterministic,
//!   thread-count-invariant results.
//!
//! Supporting modules: [`numerics`] (complex linear algebra, RNG streams,
//! log-domain combinatorics), [`modem`] (Gray-coded square M-QAM),
//! [`quantizer`] (scalar quantizer design and Bussgang estimation),
//! [`channel`] (system model), [`detector`] (zero-forcing receivers).

pub mod analytics;
pub mod channel;
pub mod detector;
pub mod error;
pub mod harness;
pub mod modem;
pub mod numerics;
pub mod quantizer;

pub use error::{Error, Result};
