//! Rayleigh-fading uplink channel generation and received-vector synthesis
//! (`y = Hx + n`), plus the receive-side gain-control scales used before
//! quantization.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::numerics::linalg::{cgauss_matrix, CMatrix};

/// Link dimensioning and power levels.
///
/// The per-user symbol energy is `sigma_x2` and the per-antenna complex
/// noise variance is `sigma_n2`; the transmit SNR `γ_0 = σ_x²/σ_n²` is
/// always derived, never stored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkParams {
    pub n_antennas: usize,
    pub k_users: usize,
    pub sigma_x2: f64,
    pub sigma_n2: f64,
}

impl LinkParams {
    pub fn new(n_antennas: usize, k_users: usize, sigma_x2: f64, sigma_n2: f64) -> LinkParams {
        assert!(
            n_antennas >= k_users && k_users >= 1,
            "need N >= K >= 1, got N={n_antennas}, K={k_users}"
        );
        assert!(
            sigma_x2 > 0.0 && sigma_n2 > 0.0,
            "powers must be positive, got sigma_x2={sigma_x2}, sigma_n2={sigma_n2}"
        );
        LinkParams {
            n_antennas,
            k_users,
            sigma_x2,
            sigma_n2,
        }
    }

    /// Transmit SNR per user, `γ_0 = σ_x²/σ_n²`.
    pub fn gamma0(&self) -> f64 {
        self.sigma_x2 / self.sigma_n2
    }
}

/// Draw an N×K channel with i.i.d. zero-mean unit-variance complex
/// Gaussian entries (Rayleigh fading, no large-scale effects).
pub fn draw_channel(p: &LinkParams, rng: &mut impl Rng) -> CMatrix {
    cgauss_matrix(p.n_antennas, p.k_users, 1.0, rng)
}

/// Synthesize the received vector `y = Hx + n` with fresh noise
/// `n ~ CN(0, σ_n² I)` from `rng`.
pub fn transmit(
    h: &CMatrix,
    x: &[Complex64],
    p: &LinkParams,
    rng: &mut impl Rng,
) -> Result<Vec<Complex64>> {
    let mut y = h.matvec(x)?;
    let s = (p.sigma_n2 / 2.0).sqrt();
    for v in &mut y {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        *v += Complex64::new(s * re, s * im);
    }
    Ok(y)
}

/// Channel-averaged standard deviation of each real component of `y`:
/// `√((Kσ_x² + σ_n²)/2)`. One global gain-control setting for the whole
/// array, using only ensemble statistics.
pub fn component_sigma_average(p: &LinkParams) -> f64 {
    ((p.k_users as f64 * p.sigma_x2 + p.sigma_n2) / 2.0).sqrt()
}

/// Per-antenna component standard deviations conditioned on the channel
/// realization: `σ_i = √((σ_x²·Σ_k|h_ik|² + σ_n²)/2)`. One gain-control
/// setting per antenna, matched to that antenna's actual received power.
pub fn component_sigmas_matched(h: &CMatrix, p: &LinkParams) -> Vec<f64> {
    (0..h.rows())
        .map(|i| {
            let row_power: f64 = h.row(i).iter().map(|v| v.norm_sqr()).sum();
            ((p.sigma_x2 * row_power + p.sigma_n2) / 2.0).sqrt()
        })
        .collect()
}

/// Per-antenna component standard deviations measured from a block of
/// received vectors (rows of `block` are uses of the same channel):
/// the RMS of the 2·S real components seen at each antenna.
pub fn component_sigmas_empirical(block: &[Vec<Complex64>], n_antennas: usize) -> Vec<f64> {
    assert!(!block.is_empty(), "need at least one received vector");
    let uses = block.len() as f64;
    (0..n_antennas)
        .map(|i| {
            let power: f64 = block.iter().map(|y| y[i].norm_sqr()).sum();
            (power / (2.0 * uses)).sqrt().max(f64::MIN_POSITIVE)
        })
        .collect()
}
