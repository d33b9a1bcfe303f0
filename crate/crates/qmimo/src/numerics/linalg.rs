//! Dense complex matrices and the Gram-inverse path used by zero-forcing
//! detection.
//!
//! Only the operations the simulator needs are implemented: construction,
//! products, Hermitian transpose, and inversion of Hermitian
//! positive-definite Gram matrices via Cholesky factorization. The Cholesky
//! route doubles as the rank-deficiency detector: a non-positive pivot or an
//! extreme diagonal spread signals a degenerate channel draw.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Condition-estimate threshold above which a Gram matrix is treated as
/// numerically singular.
const COND_LIMIT: f64 = 1e12;

/// Dense complex matrix in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    /// Zero matrix of the given shape.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::ZERO; rows * cols],
        }
    }

    /// Identity matrix of order `n`.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::ONE;
        }
        m
    }

    /// Build from a function of (row, col).
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Build from row-major data.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(rows * cols, data.len(), "row-major data length mismatch");
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Row-major entry slice.
    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    /// One row as a slice.
    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Hermitian (conjugate) transpose.
    pub fn hermitian(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self[(i, l)];
                if a == Complex64::ZERO {
                    continue;
                }
                let rrow = rhs.row(l);
                let orow = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, r) in orow.iter_mut().zip(rrow) {
                    *o += a * r;
                }
            }
        }
        out
    }

    /// Matrix–vector product `self * x`.
    pub fn matvec(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch {
                context: format!(
                    "matvec: matrix is {}x{}, vector has {} entries",
                    self.rows,
                    self.cols,
                    x.len()
                ),
            });
        }
        Ok(self
            .data
            .chunks_exact(self.cols)
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Adjoint product `self^H * x` without materializing the transpose.
    pub fn hermitian_matvec(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        if x.len() != self.rows {
            return Err(Error::DimensionMismatch {
                context: format!(
                    "hermitian_matvec: matrix is {}x{}, vector has {} entries",
                    self.rows,
                    self.cols,
                    x.len()
                ),
            });
        }
        let mut out = vec![Complex64::ZERO; self.cols];
        for (i, xi) in x.iter().enumerate() {
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o += a.conj() * xi;
            }
        }
        Ok(out)
    }

    /// Gram matrix `self^H * self` (cols x cols), exploiting Hermitian
    /// symmetry.
    pub fn gram(&self) -> CMatrix {
        let k = self.cols;
        let mut g = CMatrix::zeros(k, k);
        for row in self.data.chunks_exact(k) {
            for a in 0..k {
                let ca = row[a].conj();
                for b in a..k {
                    g[(a, b)] += ca * row[b];
                }
            }
        }
        for a in 0..k {
            for b in 0..a {
                g[(a, b)] = g[(b, a)].conj();
            }
        }
        g
    }

    /// Scale every entry by a real factor.
    pub fn scale(&self, factor: f64) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    /// Largest entry magnitude of `self - rhs`.
    pub fn max_abs_diff(&self, rhs: &CMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Draw a matrix of i.i.d. circularly symmetric complex Gaussian entries
/// with zero mean and the given total per-entry variance (split equally
/// between real and imaginary parts).
pub fn cgauss_matrix(rows: usize, cols: usize, variance: f64, rng: &mut impl Rng) -> CMatrix {
    assert!(variance > 0.0, "cgauss_matrix requires variance > 0");
    let comp_sigma = (variance / 2.0).sqrt();
    let data = (0..rows * cols)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re * comp_sigma, im * comp_sigma)
        })
        .collect();
    CMatrix::from_vec(rows, cols, data)
}

/// Cholesky factorization of a Hermitian positive-definite matrix:
/// `G = L L^H` with lower-triangular `L`.
///
/// Fails with `SingularGram` when a pivot is non-positive/non-finite or the
/// squared diagonal spread of `L` (a cheap condition estimate) exceeds 1e12.
fn cholesky(g: &CMatrix) -> Result<CMatrix> {
    let n = g.rows();
    assert_eq!(n, g.cols(), "cholesky requires a square matrix");
    let mut l = CMatrix::zeros(n, n);
    let mut diag_min = f64::INFINITY;
    let mut diag_max = 0.0f64;
    for j in 0..n {
        let mut sum = g[(j, j)].re;
        for p in 0..j {
            sum -= l[(j, p)].norm_sqr();
        }
        if !(sum.is_finite() && sum > 0.0) {
            return Err(Error::SingularGram {
                cond_estimate: f64::INFINITY,
            });
        }
        let ljj = sum.sqrt();
        diag_min = diag_min.min(ljj);
        diag_max = diag_max.max(ljj);
        let cond_estimate = (diag_max / diag_min).powi(2);
        if cond_estimate > COND_LIMIT {
            return Err(Error::SingularGram { cond_estimate });
        }
        l[(j, j)] = Complex64::new(ljj, 0.0);
        for i in j + 1..n {
            let mut s = g[(i, j)];
            for p in 0..j {
                s -= l[(i, p)] * l[(j, p)].conj();
            }
            l[(i, j)] = s / ljj;
        }
    }
    Ok(l)
}

/// Invert a lower-triangular matrix by forward substitution.
fn invert_lower(l: &CMatrix) -> CMatrix {
    let n = l.rows();
    let mut inv = CMatrix::zeros(n, n);
    for j in 0..n {
        inv[(j, j)] = Complex64::ONE / l[(j, j)];
        for i in j + 1..n {
            let mut s = Complex64::ZERO;
            for p in j..i {
                s += l[(i, p)] * inv[(p, j)];
            }
            inv[(i, j)] = -s / l[(i, i)];
        }
    }
    inv
}

/// Inverse of a Hermitian positive-definite matrix via Cholesky:
/// `G^{-1} = L^{-H} L^{-1}`.
pub fn hpd_inverse(g: &CMatrix) -> Result<CMatrix> {
    let linv = invert_lower(&cholesky(g)?);
    Ok(linv.hermitian().mul(&linv))
}

/// `(H^H H)^{-1}` for a tall full-column-rank matrix `H`.
///
/// This is the Gram-inverse factor of the zero-forcing matrix; a
/// `SingularGram` error signals a degenerate draw the caller must redraw
/// and count.
pub fn gram_inverse(h: &CMatrix) -> Result<CMatrix> {
    assert!(
        h.rows() >= h.cols(),
        "gram_inverse requires rows >= cols (got {}x{})",
        h.rows(),
        h.cols()
    );
    hpd_inverse(&h.gram())
}
