//! Zero-forcing detection for the unquantized and quantized receive
//! chains, and the per-user post-detection SINR.
//!
//! The unquantized detector is `A = H(H^H H)^{-1}`, applied as
//! `x̂ = A^H y`. Under the additive-quantization-noise linearization the
//! quantized observation keeps a scaled copy of the signal, so the
//! quantized detector is the same matrix scaled by `1/α`, which restores
//! the signal to unit gain and leaves only effective noise.

use num_complex::Complex64;

use crate::analytics::gamma_q0;
use crate::channel::LinkParams;
use crate::error::Result;
use crate::numerics::linalg::{gram_inverse, CMatrix};
use crate::quantizer::AqnmParams;

/// A ZF detection matrix (stored as the N×K matrix `A`; detection applies
/// its conjugate transpose) together with the gain compensation baked in.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectionMatrix {
    pub a: CMatrix,
    pub alpha_used: f64,
}

/// Unquantized ZF: `A = H(H^H H)^{-1}`, so `A^H H = I`.
pub fn zf_matrix(h: &CMatrix) -> Result<DetectionMatrix> {
    let ginv = gram_inverse(h)?;
    Ok(DetectionMatrix {
        a: h.mul(&ginv),
        alpha_used: 1.0,
    })
}

/// Quantized-chain ZF: `A_q = (1/α)·H(H^H H)^{-1}`, so `A_q^H H = (1/α)I`
/// and the AQNM signal path `α·Hx` detects to `x` exactly.
pub fn zf_matrix_quantized(h: &CMatrix, params: &AqnmParams) -> Result<DetectionMatrix> {
    assert!(
        params.alpha > 0.0 && params.alpha <= 1.0,
        "gain must satisfy 0 < alpha <= 1, got {}",
        params.alpha
    );
    let base = zf_matrix(h)?;
    Ok(DetectionMatrix {
        a: base.a.scale(1.0 / params.alpha),
        alpha_used: params.alpha,
    })
}

/// Apply a detection matrix: `x̂ = A^H y`.
pub fn detect(d: &DetectionMatrix, y: &[Complex64]) -> Result<Vec<Complex64>> {
    d.a.hermitian_matvec(y)
}

/// Per-user post-detection SINR of the quantized ZF chain for one channel
/// realization: `γ_{q,k} = γ_q0 / [(H^H H)^{-1}]_kk`. With `α = 1` this is
/// the unquantized ZF SNR `γ_0 / [(H^H H)^{-1}]_kk`.
pub fn post_detection_sinr(
    h: &CMatrix,
    p: &LinkParams,
    params: &AqnmParams,
) -> Result<Vec<f64>> {
    let g_q0 = gamma_q0(p.sigma_x2, p.sigma_n2, p.k_users, params.alpha);
    let ginv = gram_inverse(h)?;
    Ok((0..h.cols()).map(|k| g_q0 / ginv[(k, k)].re).collect())
}
