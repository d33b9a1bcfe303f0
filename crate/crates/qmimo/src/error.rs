//! Crate-wide error type.
//!
//! Each variant corresponds to one failure channel of the public API; all
//! other contract violations (caller bugs) are asserted.

use thiserror::Error;

/// Errors surfaced by the simulator and analytics APIs.
#[derive(Debug, Error)]
pub enum Error {
    /// The Gram matrix `H^H H` is numerically rank-deficient (condition
    /// estimate above 1e12) and cannot be inverted. For the Monte Carlo
    /// harness this signals a degenerate channel draw that must be redrawn
    /// and counted, never regularized.
    #[error("Gram matrix is numerically singular (condition estimate {cond_estimate:.3e})")]
    SingularGram { cond_estimate: f64 },

    /// Lloyd–Max design failed to reach the movement tolerance within the
    /// sweep budget. This indicates an implementation bug: the accelerated
    /// iteration converges for every supported resolution (1..=8 bits).
    #[error("Lloyd-Max iteration did not converge: movement {movement:.3e} after {sweeps} sweeps")]
    NoConvergence { sweeps: usize, movement: f64 },

    /// A bit sequence length is incompatible with the constellation.
    #[error("bit sequence length {got} is not compatible ({requirement})")]
    LengthMismatch { got: usize, requirement: String },

    /// Vector or matrix dimensions do not match the operation's contract.
    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },

    /// A full-precision (infinite-resolution) receiver has no BER floor;
    /// the floor query is signaled rather than computed as zero.
    #[error("full-precision resolution has no BER floor")]
    InfinitePrecision,

    /// The requested target BER is at or below the BER floor for the given
    /// resolution, so no finite SNR attains it.
    #[error("target BER {target:.3e} is unreachable: floor is {floor:.3e}")]
    Unreachable { target: f64, floor: f64 },

    /// Configuration rejected before running (CLI or programmatic).
    #[error("invalid configuration: {0}")]
    UsageError(String),

    /// Filesystem or stream I/O failure while emitting results.
    #[error("I/O failure: {0}")]
    IoFailure(#[from] std::io::Error),

    /// A results file (CSV curve or quantizer table) failed to parse.
    #[error("parse error: {0}")]
    ParseError(String),
}

pub type Result<T> = std::result::Result<T, Error>;
