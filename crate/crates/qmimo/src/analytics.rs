//! Closed-form BER engine for ZF detection under coarse quantization:
//! effective post-quantization SNR, full and two-term M-QAM BER over the
//! Rayleigh/ZF fading distribution, asymptotic BER floors, and inverse
//! solves (SNR required for a target BER, and the dB degradation relative
//! to a full-precision receiver).
//!
//! The BER formula averages the AWGN M-QAM expression over the ZF
//! per-user SINR distribution (a Gamma with shape `D+1 = N−K+1`), giving
//! terms `B(i) = [½(1−μ_i)]^{D+1} Σ_{j=0}^{D} C(D+j, j)·[½(1+μ_i)]^j`
//! with `μ_i = √(t/(1+t))`, `t = 3(2i+1)²γ/(2(M−1))`. At `D = 90` the
//! binomials reach ~10^53, so every term is assembled in the log domain.

use crate::error::{Error, Result};
use crate::numerics::special::{log_binomial, logsumexp};
use crate::quantizer::{AqnmParams, Resolution};

/// Inputs of one closed-form BER evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BerQuery {
    pub m: usize,
    pub n_antennas: usize,
    pub k_users: usize,
    pub params: AqnmParams,
    pub gamma0: f64,
}

impl BerQuery {
    pub fn new(
        m: usize,
        n_antennas: usize,
        k_users: usize,
        params: AqnmParams,
        gamma0: f64,
    ) -> BerQuery {
        assert!(
            matches!(m, 4 | 16 | 64),
            "constellation size must be 4, 16, or 64, got {m}"
        );
        assert!(
            n_antennas >= k_users && k_users >= 1,
            "need N >= K >= 1, got N={n_antennas}, K={k_users}"
        );
        assert!(
            gamma0.is_finite() && gamma0 >= 0.0,
            "gamma0 must be finite and non-negative, got {gamma0}"
        );
        BerQuery {
            m,
            n_antennas,
            k_users,
            params,
            gamma0,
        }
    }

    fn diversity(&self) -> usize {
        self.n_antennas - self.k_users
    }

    fn effective_snr(&self) -> f64 {
        gamma_q0_from_gamma0(self.gamma0, self.k_users, self.params.alpha)
    }
}

/// Effective post-quantization SNR:
/// `γ_q0 = σ_x² / (σ_n² + ((1−α)/α)(Kσ_x² + σ_n²))`.
pub fn gamma_q0(sigma_x2: f64, sigma_n2: f64, k_users: usize, alpha: f64) -> f64 {
    assert!(
        alpha > 0.0 && alpha <= 1.0,
        "gain must satisfy 0 < alpha <= 1, got {alpha}"
    );
    assert!(
        sigma_x2 > 0.0 && sigma_n2 > 0.0 && k_users >= 1,
        "need positive powers and K >= 1"
    );
    sigma_x2 / (sigma_n2 + ((1.0 - alpha) / alpha) * (k_users as f64 * sigma_x2 + sigma_n2))
}

/// Same quantity expressed through `γ_0 = σ_x²/σ_n²`:
/// `γ_q0 = γ_0 / (1 + ((1−α)/α)(Kγ_0 + 1))`. Exactly `γ_0` at `α = 1`.
pub fn gamma_q0_from_gamma0(gamma0: f64, k_users: usize, alpha: f64) -> f64 {
    if alpha == 1.0 {
        return gamma0;
    }
    gamma0 / (1.0 + ((1.0 - alpha) / alpha) * (k_users as f64 * gamma0 + 1.0))
}

/// Limit of `γ_q0` as transmit power grows: `α/((1−α)K)`.
pub fn gamma_q0_limit(k_users: usize, alpha: f64) -> f64 {
    alpha / ((1.0 - alpha) * k_users as f64)
}

/// Signed integer weights of the exact M-QAM bit-error expansion,
/// aggregated over bit positions with exact integer floor arithmetic:
/// coefficient of `B(i)` is
/// `Σ_k (−1)^⌊i·2^{k−1}/r⌋ · (2^{k−1} − ⌊(2i·2^{k−1} + r)/(2r)⌋)`,
/// for `r = √M`, `k = 1..log2 r`, `i = 0..(1−2^{−k})r − 1`.
fn mqam_coefficients(r: i64) -> Vec<i64> {
    debug_assert!(r >= 2 && (r & (r - 1)) == 0);
    let log2r = r.trailing_zeros();
    let mut c = vec![0i64; (r - 1) as usize];
    for k in 1..=log2r {
        let p = 1i64 << (k - 1);
        let count = r - (r >> k);
        for i in 0..count {
            let sign = if ((i * p) / r) % 2 == 0 { 1 } else { -1 };
            let weight = p - (2 * i * p + r) / (2 * r);
            c[i as usize] += sign * weight;
        }
    }
    c
}

/// `ln B(i)` for the fading-averaged M-QAM term, fully in the log domain:
/// `ln B = (D+1)·ln((1−μ)/2) + logsumexp_j [ln C(D+j, j) + j·ln((1+μ)/2)]`
/// with the half-factors expanded through `ln1p` so that `μ → 1` keeps
/// full relative precision.
fn ln_b_term(i: usize, m: usize, d: usize, gamma: f64) -> f64 {
    let s = (2 * i + 1) as f64;
    let t = 3.0 * s * s * gamma / (2.0 * (m as f64 - 1.0));
    let mu = (t / (1.0 + t)).sqrt();
    // (1-mu)/2 = 1/(2(1+t)(1+mu)), so its log never cancels even as mu -> 1.
    let ln_half_minus = -t.ln_1p() - mu.ln_1p() - std::f64::consts::LN_2;
    let ln_half_plus = mu.ln_1p() - std::f64::consts::LN_2;
    let terms: Vec<f64> = (0..=d as u64)
        .map(|j| log_binomial(d as u64 + j, j) + j as f64 * ln_half_plus)
        .collect();
    (d as f64 + 1.0) * ln_half_minus + logsumexp(&terms)
}

/// Full closed-form BER at effective SNR `gamma` with diversity order
/// `d + 1`. Factored around the dominant `i = 0` term so results stay
/// accurate down to the underflow limit.
fn ber_from_effective_snr(m: usize, d: usize, gamma: f64) -> f64 {
    let r = (m as f64).sqrt().round() as i64;
    let coeff = mqam_coefficients(r);
    let pref = 2.0 / (r as f64 * (r as f64).log2());
    let ln_b0 = ln_b_term(0, m, d, gamma);
    let mut sum = 0.0;
    for (i, &c) in coeff.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let rel = if i == 0 {
            1.0
        } else {
            (ln_b_term(i, m, d, gamma) - ln_b0).exp()
        };
        sum += c as f64 * rel;
    }
    (pref * ln_b0.exp() * sum).clamp(0.0, 1.0)
}

/// Closed-form BER with all expansion terms.
pub fn ber_mqam_full(q: &BerQuery) -> f64 {
    ber_from_effective_snr(q.m, q.diversity(), q.effective_snr())
}

/// Two-term truncation keeping only `B(0)` and `B(1)`:
/// `(2(r−1)/(r·log2 r))·B(0) + (2(r−2)/(r·log2 r))·B(1)`.
/// For QPSK the second coefficient vanishes and this equals the full form.
pub fn ber_mqam_twoterm(q: &BerQuery) -> f64 {
    let (m, d, gamma) = (q.m, q.diversity(), q.effective_snr());
    let r = (m as f64).sqrt().round() as i64;
    let denom = r as f64 * (r as f64).log2();
    let b0 = ln_b_term(0, m, d, gamma).exp();
    let mut ber = 2.0 * (r - 1) as f64 / denom * b0;
    if r > 2 {
        ber += 2.0 * (r - 2) as f64 / denom * ln_b_term(1, m, d, gamma).exp();
    }
    ber.clamp(0.0, 1.0)
}

/// Asymptotic BER floor as transmit power → ∞ under a finite-resolution
/// front end: the full formula evaluated at `γ_q0 = α/((1−α)K)`. Full
/// precision has no floor and is reported as an error rather than 0.
pub fn ber_floor(m: usize, n_antennas: usize, k_users: usize, params: &AqnmParams) -> Result<f64> {
    if !params.b.is_finite() || params.alpha >= 1.0 {
        return Err(Error::InfinitePrecision);
    }
    let q = BerQuery::new(m, n_antennas, k_users, *params, 0.0);
    Ok(ber_from_effective_snr(
        q.m,
        q.diversity(),
        gamma_q0_limit(k_users, params.alpha),
    ))
}

/// Transmit SNR `γ_0` at which the full closed-form BER equals `target`,
/// by bisection in log-SNR over `[10^-6, 10^12]` (the BER is strictly
/// decreasing in `γ_0`). Targets at or below the quantization floor are
/// unreachable.
pub fn snr_for_ber(
    m: usize,
    n_antennas: usize,
    k_users: usize,
    params: &AqnmParams,
    target: f64,
) -> Result<f64> {
    assert!(
        target > 0.0 && target < 0.5,
        "target BER must lie in (0, 0.5), got {target}"
    );
    if params.b.is_finite() {
        let floor = ber_floor(m, n_antennas, k_users, params)?;
        if target <= floor * (1.0 + 1e-9) {
            return Err(Error::Unreachable { target, floor });
        }
    }
    let ber_at = |gamma0: f64| ber_mqam_full(&BerQuery::new(m, n_antennas, k_users, *params, gamma0));
    let (mut lo, mut hi) = (1e-6f64, 1e12f64);
    if ber_at(lo) < target {
        // Already below target at the bottom of the bracket: the interval
        // start is the answer to within the contract tolerance.
        return Ok(lo);
    }
    let mut mid = lo;
    for _ in 0..200 {
        mid = ((lo.ln() + hi.ln()) * 0.5).exp();
        let b = ber_at(mid);
        if (b - target).abs() <= 1e-6 * target {
            return Ok(mid);
        }
        if b > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(mid)
}

/// Extra transmit SNR (dB) a b-bit receiver needs over a full-precision
/// one to reach the same target BER:
/// `10·log10(γ_0(b) / γ_0(∞))`. Zero for full precision by definition.
pub fn ber_degradation(
    m: usize,
    n_antennas: usize,
    k_users: usize,
    b: Resolution,
    target: f64,
) -> Result<f64> {
    if !b.is_finite() {
        return Ok(0.0);
    }
    let quantized = snr_for_ber(m, n_antennas, k_users, &crate::quantizer::aqnm_params(b), target)?;
    let reference = snr_for_ber(
        m,
        n_antennas,
        k_users,
        &crate::quantizer::aqnm_params(Resolution::FullPrecision),
        target,
    )?;
    Ok(10.0 * (quantized / reference).log10())
}
