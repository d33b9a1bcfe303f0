//! Gray-coded square M-QAM modulation, hard-decision demodulation, and bit
//! accounting.
//!
//! A square M-QAM constellation is the Cartesian product of two identical
//! √M-ary PAM alphabets, one per quadrature axis. Each symbol label is split
//! half-and-half between the axes (first half → I, second half → Q, each
//! MSB-first) and each axis uses a binary-reflected Gray code over the
//! amplitude levels, so per-axis threshold slicing is exact maximum-likelihood
//! detection and adjacent levels differ in exactly one bit.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A Gray-labeled square QAM constellation with unit average symbol energy.
#[derive(Debug, Clone)]
pub struct Constellation {
    m: usize,
    bits_per_symbol: usize,
    bits_per_axis: usize,
    side: usize,
    /// Amplitude scale: PAM levels are `(2u - (side-1)) * scale`.
    scale: f64,
    /// `gray_of_index[u]` = Gray label of amplitude index `u`.
    gray_of_index: Vec<usize>,
    /// `index_of_gray[g]` = amplitude index carrying Gray label `g`.
    index_of_gray: Vec<usize>,
}

impl Constellation {
    /// Build the constellation for `M` ∈ {4, 16, 64}.
    pub fn new(m: usize) -> Result<Self> {
        if !matches!(m, 4 | 16 | 64) {
            return Err(Error::UsageError(format!(
                "unsupported constellation size {m} (supported: 4, 16, 64)"
            )));
        }
        let bits_per_symbol = m.ilog2() as usize;
        let side = 1usize << (bits_per_symbol / 2);
        // Unit average energy: E|x|^2 = 2 * E[level^2] = 2 * (M-1)/3 * scale^2 = 1.
        let scale = (3.0 / (2.0 * (m as f64 - 1.0))).sqrt();
        let gray_of_index: Vec<usize> = (0..side).map(|u| u ^ (u >> 1)).collect();
        let mut index_of_gray = vec![0usize; side];
        for (u, &g) in gray_of_index.iter().enumerate() {
            index_of_gray[g] = u;
        }
        Ok(Self {
            m,
            bits_per_symbol,
            bits_per_axis: bits_per_symbol / 2,
            side,
            scale,
            gray_of_index,
            index_of_gray,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.bits_per_symbol
    }

    /// All constellation points (row-major over I index, then Q index).
    pub fn points(&self) -> Vec<Complex64> {
        let mut pts = Vec::with_capacity(self.m);
        for ui in 0..self.side {
            for uq in 0..self.side {
                pts.push(Complex64::new(self.level(ui), self.level(uq)));
            }
        }
        pts
    }

    /// Gray bit label of the point with amplitude indices `(ui, uq)`,
    /// MSB-first, I bits then Q bits.
    pub fn label(&self, ui: usize, uq: usize) -> Vec<u8> {
        let mut bits = Vec::with_capacity(self.bits_per_symbol);
        for u in [ui, uq] {
            let g = self.gray_of_index[u];
            for pos in (0..self.bits_per_axis).rev() {
                bits.push(((g >> pos) & 1) as u8);
            }
        }
        bits
    }

    fn level(&self, u: usize) -> f64 {
        (2.0 * u as f64 - (self.side as f64 - 1.0)) * self.scale
    }

    /// Amplitude index from one axis' worth of bits (MSB-first Gray word).
    fn index_from_bits(&self, bits: &[u8]) -> usize {
        let mut g = 0usize;
        for &b in bits {
            g = (g << 1) | (b & 1) as usize;
        }
        self.index_of_gray[g]
    }

    /// Nearest amplitude index for a received axis coordinate.
    ///
    /// Decision boundaries sit midway between adjacent levels; an input
    /// exactly on a boundary breaks the tie toward the lower-amplitude
    /// level, and the center boundary (between the two innermost levels)
    /// breaks toward the negative one.
    fn slice_index(&self, x: f64) -> usize {
        let side = self.side as f64;
        // Continuous index coordinate: level u sits at coordinate u.
        let c = (x / self.scale + (side - 1.0)) / 2.0;
        if c <= 0.0 {
            return 0;
        }
        if c >= side - 1.0 {
            return self.side - 1;
        }
        let fl = c.floor();
        let frac = c - fl;
        let center = (side - 1.0) / 2.0;
        let u = if frac > 0.5 {
            fl + 1.0
        } else if frac < 0.5 {
            fl
        } else if fl + 1.0 <= center {
            // Both candidates below center: the higher index is the
            // lower-amplitude level.
            fl + 1.0
        } else {
            // Above center the lower index is lower-amplitude; at the exact
            // center boundary this also selects the negative level.
            fl
        };
        u as usize
    }

    /// Map a bit sequence (length divisible by log2 M) to symbols.
    pub fn modulate(&self, bits: &[u8]) -> Result<Vec<Complex64>> {
        if bits.len() % self.bits_per_symbol != 0 {
            return Err(Error::LengthMismatch {
                got: bits.len(),
                requirement: format!("multiple of log2(M) = {}", self.bits_per_symbol),
            });
        }
        Ok(bits
            .chunks_exact(self.bits_per_symbol)
            .map(|chunk| {
                let ui = self.index_from_bits(&chunk[..self.bits_per_axis]);
                let uq = self.index_from_bits(&chunk[self.bits_per_axis..]);
                Complex64::new(self.level(ui), self.level(uq))
            })
            .collect())
    }

    /// Hard-decision demodulation: per-axis slicing to the nearest
    /// constellation point, returning its Gray label bits.
    pub fn demodulate_hard(&self, symbols: &[Complex64]) -> Vec<u8> {
        let mut bits = Vec::with_capacity(symbols.len() * self.bits_per_symbol);
        for s in symbols {
            let ui = self.slice_index(s.re);
            let uq = self.slice_index(s.im);
            for u in [ui, uq] {
                let g = self.gray_of_index[u];
                for pos in (0..self.bits_per_axis).rev() {
                    bits.push(((g >> pos) & 1) as u8);
                }
            }
        }
        bits
    }
}

/// Hamming distance between equal-length bit sequences.
pub fn count_bit_errors(tx: &[u8], rx: &[u8]) -> Result<u64> {
    if tx.len() != rx.len() {
        return Err(Error::LengthMismatch {
            got: rx.len(),
            requirement: format!("equal to transmitted length {}", tx.len()),
        });
    }
    Ok(tx.iter().zip(rx).filter(|(a, b)| a != b).count() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    use crate::numerics::rng::RngStream;

    #[test]
    fn rejects_unsupported_sizes() {
        assert!(Constellation::new(8).is_err());
        assert!(Constellation::new(32).is_err());
    }

    #[test]
    fn qpsk_points_and_gray_circle() {
        let c = Constellation::new(4).unwrap();
        let s = 1.0 / 2.0f64.sqrt();
        // Labels 00,01,11,10 map to the four points (+/-1 +/- j)/sqrt(2).
        let syms = c.modulate(&[0, 0, 0, 1, 1, 1, 1, 0]).unwrap();
        let expect = [
            Complex64::new(-s, -s),
            Complex64::new(-s, s),
            Complex64::new(s, s),
            Complex64::new(s, -s),
        ];
        for (got, want) in syms.iter().zip(&expect) {
            assert!((got - want).norm() < 1e-12, "{got} vs {want}");
        }
        // Walking the Gray sequence 00,01,11,10 around the circle flips one
        // bit per step (including the wrap).
        let labels = [[0u8, 0], [0, 1], [1, 1], [1, 0]];
        for i in 0..4 {
            let a = labels[i];
            let b = labels[(i + 1) % 4];
            let diff = a.iter().zip(&b).filter(|(x, y)| x != y).count();
            assert_eq!(diff, 1);
        }
    }

    #[test]
    fn sixteen_qam_all_zeros_is_a_fixed_corner() {
        let c = Constellation::new(16).unwrap();
        let sym = c.modulate(&[0, 0, 0, 0]).unwrap()[0];
        // Levels +/-1, +/-3 scaled by 1/sqrt(10); the all-zeros corner has
        // |x|^2 = (9 + 9)/10 = 1.8.
        assert!((sym.norm_sqr() - 1.8).abs() < 1e-12);
        assert!(sym.re < 0.0 && sym.im < 0.0, "all-zeros maps to one corner");
    }

    #[test]
    fn round_trip_all_constellations() {
        for m in [4usize, 16, 64] {
            let c = Constellation::new(m).unwrap();
            let mut rng = RngStream::new(5, m as u64).rng();
            let bits: Vec<u8> = (0..100_000 / c.bits_per_symbol() * c.bits_per_symbol())
                .map(|_| rng.random_range(0..2u8))
                .collect();
            let rx = c.demodulate_hard(&c.modulate(&bits).unwrap());
            assert_eq!(bits, rx, "round trip failed for M={m}");
        }
    }

    #[test]
    fn gray_adjacency_all_axes() {
        for m in [4usize, 16, 64] {
            let c = Constellation::new(m).unwrap();
            for u in 0..c.side - 1 {
                let diff = (c.gray_of_index[u] ^ c.gray_of_index[u + 1]).count_ones();
                assert_eq!(diff, 1, "M={m} levels {u},{} not Gray-adjacent", u + 1);
            }
        }
    }

    #[test]
    fn unit_average_energy() {
        for m in [4usize, 16, 64] {
            let c = Constellation::new(m).unwrap();
            let mean: f64 =
                c.points().iter().map(|p| p.norm_sqr()).sum::<f64>() / c.m() as f64;
            assert!((mean - 1.0).abs() < 1e-12, "M={m} mean energy {mean}");
        }
    }

    #[test]
    fn empirical_energy_over_random_symbols() {
        let c = Constellation::new(64).unwrap();
        let mut rng = RngStream::new(9, 0).rng();
        let n_sym = 1_000_000usize;
        let bits: Vec<u8> = (0..n_sym * c.bits_per_symbol())
            .map(|_| rng.random_range(0..2u8))
            .collect();
        let syms = c.modulate(&bits).unwrap();
        let mean: f64 = syms.iter().map(|s| s.norm_sqr()).sum::<f64>() / n_sym as f64;
        assert!((mean - 1.0).abs() < 0.005, "mean energy {mean}");
    }

    #[test]
    fn qpsk_quadrant_slicing() {
        let c = Constellation::new(4).unwrap();
        let bits = c.demodulate_hard(&[Complex64::new(0.01, -0.02)]);
        // (+I, -Q) quadrant: I bit 1, Q bit 0 under the 00->(-,-) labeling.
        assert_eq!(bits, vec![1, 0]);
    }

    #[test]
    fn boundary_tie_breaks_toward_lower_amplitude() {
        let c = Constellation::new(16).unwrap();
        let s = (3.0 / 30.0f64).sqrt();
        // Boundary between levels 1s and 3s sits at 2s: tie -> 1s (lower
        // amplitude), whose Gray label differs from 3s's.
        let at_outer = c.demodulate_hard(&[Complex64::new(2.0 * s, 2.0 * s)]);
        let inner = c.demodulate_hard(&[Complex64::new(1.0 * s, 1.0 * s)]);
        assert_eq!(at_outer, inner);
        // Center boundary at 0: tie -> the negative innermost level.
        let at_zero = c.demodulate_hard(&[Complex64::new(0.0, 0.0)]);
        let neg_inner = c.demodulate_hard(&[Complex64::new(-s, -s)]);
        assert_eq!(at_zero, neg_inner);
    }

    #[test]
    fn exact_points_return_their_own_labels() {
        for m in [4usize, 16, 64] {
            let c = Constellation::new(m).unwrap();
            let side = c.side;
            for ui in 0..side {
                for uq in 0..side {
                    let p = Complex64::new(c.level(ui), c.level(uq));
                    assert_eq!(c.demodulate_hard(&[p]), c.label(ui, uq));
                }
            }
        }
    }

    #[test]
    fn bit_error_counting() {
        assert_eq!(count_bit_errors(&[0, 1, 1, 0], &[0, 1, 1, 0]).unwrap(), 0);
        assert_eq!(count_bit_errors(&[0, 0, 0, 0], &[1, 1, 1, 1]).unwrap(), 4);
        assert_eq!(count_bit_errors(&[0, 1, 0, 1], &[0, 1, 1, 0]).unwrap(), 2);
        assert!(count_bit_errors(&[0, 1], &[0, 1, 1]).is_err());
    }
}
