//! Scalar special functions and numerically stable combinatorics.
//!
//! Everything here is pure and allocation-free; the log-domain helpers are
//! what keep the closed-form BER evaluation finite at antenna counts where
//! direct binomial coefficients overflow (e.g. C(180, 90) ~ 1e53).

use statrs::function::erf::erfc;
use statrs::function::gamma::{gamma_lr, ln_gamma};

const SQRT_2: f64 = std::f64::consts::SQRT_2;
const LN_2PI_HALF: f64 = 0.918_938_533_204_672_78; // ln(2*pi)/2

/// Standard normal density.
pub fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x - LN_2PI_HALF).exp()
}

/// Standard normal CDF via the complementary error function.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / SQRT_2)
}

/// Natural log of the binomial coefficient C(n, k).
///
/// Computed through `ln Γ`, so it stays finite far past the range where the
/// coefficient itself overflows an `f64`.
pub fn log_binomial(n: u64, k: u64) -> f64 {
    assert!(k <= n, "log_binomial requires 0 <= k <= n (got n={n}, k={k})");
    if k == 0 || k == n {
        return 0.0;
    }
    ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0)
}

/// `ln(exp(a) + exp(b))` without overflow.
pub fn logaddexp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// `ln Σ exp(terms)` without overflow.
pub fn logsumexp(terms: &[f64]) -> f64 {
    let hi = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if hi == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    hi + terms
        .iter()
        .map(|t| (t - hi).exp())
        .sum::<f64>()
        .ln()
}

/// Minimize a unimodal function on `[a, b]` by golden-section search.
///
/// Returns the abscissa of the minimum to within `tol`.
pub fn golden_section_min(mut f: impl FnMut(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    assert!(a < b && tol > 0.0);
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a) > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Regularized lower incomplete gamma: CDF of Gamma(shape, scale=1) at `x`.
pub fn gamma_cdf(shape: f64, x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        gamma_lr(shape, x)
    }
}

/// Two-sided Kolmogorov–Smirnov statistic of `data` against a continuous
/// CDF. `data` need not be sorted.
pub fn ks_statistic(data: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    assert!(!data.is_empty());
    let mut sorted = data.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("non-finite sample"));
    let n = sorted.len() as f64;
    let mut d = 0.0f64;
    for (i, x) in sorted.iter().enumerate() {
        let f = cdf(*x);
        let lo = i as f64 / n;
        let hi = (i + 1) as f64 / n;
        d = d.max((f - lo).abs()).max((hi - f).abs());
    }
    d
}

/// Asymptotic two-sided Kolmogorov–Smirnov p-value for sample size `n` and
/// statistic `d` (Stephens' small-sample correction).
pub fn ks_pvalue(n: usize, d: f64) -> f64 {
    let sqrt_n = (n as f64).sqrt();
    let lambda = (sqrt_n + 0.12 + 0.11 / sqrt_n) * d;
    if lambda < 1e-3 {
        return 1.0;
    }
    let mut p = 0.0;
    for j in 1..=100 {
        let term = (-2.0 * (j as f64).powi(2) * lambda * lambda).exp();
        p += if j % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * p).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_binomial_trivial_cases() {
        assert_eq!(log_binomial(5, 0), 0.0);
        assert!((log_binomial(5, 2) - 10f64.ln()).abs() < 1e-12);
        assert!((log_binomial(30, 15) - 155117520f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn log_binomial_exact_to_12_digits_up_to_30() {
        // Pascal's triangle in exact u128 arithmetic.
        let mut row = vec![1u128];
        for n in 0..=30u64 {
            for (k, &c) in row.iter().enumerate() {
                let rel = (log_binomial(n, k as u64).exp() - c as f64).abs() / c as f64;
                assert!(rel < 1e-12, "C({n},{k}) rel err {rel}");
            }
            let mut next = vec![1u128];
            for w in row.windows(2) {
                next.push(w[0] + w[1]);
            }
            next.push(1);
            row = next;
        }
    }

    #[test]
    fn logaddexp_handles_extremes() {
        assert_eq!(logaddexp(f64::NEG_INFINITY, 3.0), 3.0);
        assert!((logaddexp(700.0, 700.0) - (700.0 + 2f64.ln())).abs() < 1e-12);
        assert!((logsumexp(&[0.0, 0.0, 0.0]) - 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn normal_cdf_reference_points() {
        // The underlying erfc is a rational approximation good to ~1e-11
        // absolute, which is far tighter than any tolerance built on it.
        assert!((normal_cdf(0.0) - 0.5).abs() < 1e-15);
        assert!((normal_cdf(1.0) - 0.841_344_746_068_542_9).abs() < 1e-10);
        assert!((normal_cdf(-3.0) - 1.349_898_031_630_094_5e-3).abs() < 1e-10);
    }

    #[test]
    fn golden_section_finds_parabola_minimum() {
        let x = golden_section_min(|x| (x - 1.25) * (x - 1.25), 0.0, 4.0, 1e-9);
        assert!((x - 1.25).abs() < 1e-7);
    }

    #[test]
    fn ks_uniform_self_test() {
        // CDF evaluated on its own quantiles: tiny statistic, p near 1.
        let data: Vec<f64> = (0..1000).map(|i| (i as f64 + 0.5) / 1000.0).collect();
        let d = ks_statistic(&data, |x| x.clamp(0.0, 1.0));
        assert!(d < 0.002);
        assert!(ks_pvalue(1000, d) > 0.99);
    }

    #[test]
    fn gamma_cdf_exponential_case() {
        // Gamma(1,1) is Exp(1).
        assert!((gamma_cdf(1.0, 1.0) - (1.0 - (-1.0f64).exp())).abs() < 1e-12);
        assert_eq!(gamma_cdf(2.0, 0.0), 0.0);
    }
}
