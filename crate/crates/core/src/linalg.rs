//! Dense complex linear algebra.
//!
//! Everything in the crate is carried as a [`ComplexMatrix`]: operators,
//! effects, density matrices and Gram matrices. Hermitian spectra come from a
//! cyclic complex Jacobi solver, which is accurate to a few ulps for the small
//! dimensions used here and needs no LAPACK.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Default tolerance on `max |M - M^dagger|` for Hermitian inputs.
pub const HERMITIAN_TOL: f64 = 1e-9;
/// Relative off-diagonal Frobenius norm at which Jacobi sweeps stop.
pub const JACOBI_TOL: f64 = 1e-12;
pub const JACOBI_MAX_SWEEPS: usize = 100;
/// Eigenvalues in `[-PSD_CLAMP_TOL, 0)` are treated as zero by [`psd_sqrt`].
pub const PSD_CLAMP_TOL: f64 = 1e-9;

/// Eigenvalues whose magnitude is below this multiple of `eps * max(1, |spectrum|)`
/// are rounding noise and are snapped to zero before taking square roots.
const SNAP_ULPS: f64 = 64.0;

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

/// Wire format: `{"rows", "cols", "re", "im"}` with row-major parts.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl TryFrom<MatrixJson> for ComplexMatrix {
    type Error = Error;

    fn try_from(m: MatrixJson) -> Result<Self> {
        if m.re.len() != m.im.len() {
            return Err(Error::Malformed(format!(
                "re has {} entries but im has {}",
                m.re.len(),
                m.im.len()
            )));
        }
        let data = m.re.iter().zip(&m.im).map(|(&re, &im)| C64::new(re, im)).collect();
        ComplexMatrix::new(m.rows, m.cols, data)
    }
}

impl From<ComplexMatrix> for MatrixJson {
    fn from(m: ComplexMatrix) -> Self {
        MatrixJson {
            rows: m.rows,
            cols: m.cols,
            re: m.data.iter().map(|z| z.re).collect(),
            im: m.data.iter().map(|z| z.im).collect(),
        }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self[(r, c)];
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Malformed(format!("empty shape {rows}x{cols}")));
        }
        if data.len() != rows * cols {
            return Err(Error::Malformed(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix { rows, cols, data: vec![C64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        ComplexMatrix { rows, cols, data }
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        m
    }

    /// Builds a matrix from nested real rows; handy for literals in tests.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows.iter().flat_map(|r| r.iter().map(|&x| C64::new(x, 0.0))).collect();
        Self::new(rows.len(), cols, data)
    }

    /// `|u><v|`
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        Self::from_fn(u.len(), v.len(), |r, c| u[r] * v[c].conj())
    }

    /// `|v><v|`
    pub fn projector(v: &[C64]) -> Self {
        Self::outer(v, v)
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<C64>]) -> Result<Self> {
        let cols = columns.len();
        let rows = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::Malformed("columns of unequal length".into()));
        }
        if rows == 0 || cols == 0 {
            return Err(Error::Malformed("empty column set".into()));
        }
        let mut m = Self::zeros(rows, cols);
        for (c, col) in columns.iter().enumerate() {
            for (r, &z) in col.iter().enumerate() {
                m[(r, c)] = z;
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Side length of a square matrix.
    pub fn dim(&self) -> usize {
        debug_assert!(self.is_square());
        self.rows
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn column(&self, c: usize) -> Vec<C64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn ensure_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare { rows: self.rows, cols: self.cols })
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max |M - M^dagger|` elementwise; infinite for non-square input.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut dev = 0.0_f64;
        for r in 0..n {
            for c in r..n {
                dev = dev.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        dev
    }

    /// `(M + M^dagger) / 2`
    pub fn hermitian_part(&self) -> Self {
        let adj = self.adjoint();
        (self + &adj).scale_real(0.5)
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.cols, "mul_vec: dimension mismatch");
        (0..self.rows)
            .map(|r| self.data[r * self.cols..(r + 1) * self.cols].iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `<v|M|v>`
    pub fn expectation(&self, v: &[C64]) -> C64 {
        inner(v, &self.mul_vec(v))
    }

    /// `Re tr(self * other)` without forming the product.
    pub fn trace_product_re(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!(self.cols, other.rows);
        assert_eq!(self.rows, other.cols);
        let mut acc = 0.0;
        for r in 0..self.rows {
            for k in 0..self.cols {
                acc += (self[(r, k)] * other[(k, r)]).re;
            }
        }
        acc
    }

    /// Copies `block` into this matrix with its top-left corner at `(row, col)`.
    pub fn set_block(&mut self, row: usize, col: usize, block: &ComplexMatrix) {
        assert!(row + block.rows <= self.rows && col + block.cols <= self.cols);
        for r in 0..block.rows {
            for c in 0..block.cols {
                self[(row + r, col + c)] = block[(r, c)];
            }
        }
    }

    pub fn block(&self, row: usize, col: usize, rows: usize, cols: usize) -> ComplexMatrix {
        Self::from_fn(rows, cols, |r, c| self[(row + r, col + c)])
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.cols + c]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product: inner dimensions differ");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                let rhs_row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let out_row = &mut out.data[r * rhs.cols..(r + 1) * rhs.cols];
                for (o, b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix sum: shapes differ");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix difference: shapes differ");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// `<u|v>`, antilinear in the first argument.
pub fn inner(u: &[C64], v: &[C64]) -> C64 {
    assert_eq!(u.len(), v.len(), "inner product: lengths differ");
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

pub fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Spectral decomposition of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Columns are the orthonormal eigenvectors, in eigenvalue order.
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn max_eigenvalue(&self) -> f64 {
        *self.eigenvalues.last().expect("nonempty spectrum")
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// Eigenvector belonging to the largest eigenvalue.
    pub fn top_vector(&self) -> Vec<C64> {
        self.eigenvectors.column(self.eigenvalues.len() - 1)
    }

    /// `V diag(f(lambda)) V^dagger`
    pub fn map(&self, mut f: impl FnMut(f64) -> f64) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let weights: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        ComplexMatrix::from_fn(n, n, |r, c| {
            (0..n)
                .filter(|&k| weights[k] != 0.0)
                .map(|k| v[(r, k)] * v[(c, k)].conj() * weights[k])
                .sum()
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map(|l| l)
    }

    /// Threshold below which eigenvalues are indistinguishable from zero.
    pub fn noise_floor(&self) -> f64 {
        let scale = self.eigenvalues.iter().fold(1.0_f64, |m, l| m.max(l.abs()));
        SNAP_ULPS * f64::EPSILON * scale
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// The input is symmetrized before iterating, so `tol` only gates how far from
/// Hermitian the caller may be.
pub fn hermitian_eig(m: &ComplexMatrix, tol: f64) -> Result<EigenDecomposition> {
    m.ensure_square()?;
    let deviation = m.hermitian_deviation();
    if deviation.is_nan() || deviation > tol {
        return Err(Error::NotHermitian { deviation });
    }
    let n = m.dim();
    let mut a = m.hermitian_part().data;
    let mut v = ComplexMatrix::identity(n).data;
    let fro = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let threshold = JACOBI_TOL * fro;

    let off_norm = |a: &[C64]| -> f64 {
        let mut s = 0.0;
        for p in 0..n {
            for q in 0..n {
                if p != q {
                    s += a[p * n + q].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_norm(&a) <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, n, p, q);
            }
        }
    }
    if !converged {
        let off = off_norm(&a);
        if off > threshold {
            return Err(Error::NoConvergence { sweeps: JACOBI_MAX_SWEEPS, off_norm: off });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].re.total_cmp(&a[j * n + j].re));
    let eigenvalues = order.iter().map(|&i| a[i * n + i].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |r, c| v[r * n + order[c]]);
    Ok(EigenDecomposition { eigenvalues, eigenvectors })
}

/// One complex Jacobi rotation annihilating `a[p][q]`.
///
/// The phase of `a[p][q]` is absorbed into column `q` so that the remaining
/// 2x2 problem is real symmetric; the classic tangent formula then applies.
fn rotate(a: &mut [C64], v: &mut [C64], n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase_conj = (apq / r).conj();
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // U = diag(1, e^{-i phi}) * [[c, s], [-s, c]]
    let u00 = C64::new(c, 0.0);
    let u01 = C64::new(s, 0.0);
    let u10 = phase_conj * -s;
    let u11 = phase_conj * c;

    for k in 0..n {
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        a[k * n + p] = akp * u00 + akq * u10;
        a[k * n + q] = akp * u01 + akq * u11;
    }
    for k in 0..n {
        let apk = a[p * n + k];
        let aqk = a[q * n + k];
        a[p * n + k] = u00.conj() * apk + u10.conj() * aqk;
        a[q * n + k] = u01.conj() * apk + u11.conj() * aqk;
    }
    a[p * n + q] = C64::new(0.0, 0.0);
    a[q * n + p] = C64::new(0.0, 0.0);
    a[p * n + p] = C64::new(app - t * r, 0.0);
    a[q * n + q] = C64::new(aqq + t * r, 0.0);

    for k in 0..n {
        let vkp = v[k * n + p];
        let vkq = v[k * n + q];
        v[k * n + p] = vkp * u00 + vkq * u10;
        v[k * n + q] = vkp * u01 + vkq * u11;
    }
}

/// Largest eigenvalue of a Hermitian matrix.
pub fn max_eigenvalue(m: &ComplexMatrix) -> Result<f64> {
    Ok(hermitian_eig(m, HERMITIAN_TOL)?.max_eigenvalue())
}

/// Largest singular value, `sqrt(lambda_max(M^dagger M))`.
pub fn operator_norm(m: &ComplexMatrix) -> f64 {
    let gram = if m.rows() <= m.cols() { m * &m.adjoint() } else { &m.adjoint() * m };
    // A Gram product is Hermitian to the last bit, so only convergence can fail,
    // and 100 sweeps are far beyond what dims <= 512 need.
    let top = hermitian_eig(&gram, f64::INFINITY)
        .map(|e| e.max_eigenvalue())
        .unwrap_or_else(|_| gram.frobenius_norm());
    top.max(0.0).sqrt()
}

/// Positive square root of a PSD matrix.
///
/// Eigenvalues in `[-tol, 0)` are clamped to zero; anything more negative is
/// rejected.
pub fn psd_sqrt(a: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(a, HERMITIAN_TOL.max(tol))?;
    psd_sqrt_from_eig(&eig, tol)
}

pub(crate) fn psd_sqrt_from_eig(eig: &EigenDecomposition, tol: f64) -> Result<ComplexMatrix> {
    let min = eig.min_eigenvalue();
    if min < -tol {
        return Err(Error::NotPositive { min_eigenvalue: min });
    }
    let floor = eig.noise_floor();
    Ok(eig.map(|l| if l <= floor { 0.0 } else { l.sqrt() }))
}

/// Kronecker product `A ⊗ B`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (br, bc) = (b.rows(), b.cols());
    ComplexMatrix::from_fn(a.rows() * br, a.cols() * bc, |r, c| a[(r / br, c / bc)] * b[(r % br, c % bc)])
}

/// `(sum_{i != j} |G_ij|^2)^{1/2}`
pub fn offdiag_frobenius(g: &ComplexMatrix) -> f64 {
    let mut s = 0.0;
    for r in 0..g.rows() {
        for c in 0..g.cols() {
            if r != c {
                s += g[(r, c)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn sample_hermitian() -> ComplexMatrix {
        // fixed, non-degenerate, with complex off-diagonals
        let mut m = ComplexMatrix::zeros(4, 4);
        let entries = [
            ((0, 0), c(1.0, 0.0)),
            ((1, 1), c(-0.5, 0.0)),
            ((2, 2), c(2.25, 0.0)),
            ((3, 3), c(0.3, 0.0)),
            ((0, 1), c(0.4, -0.7)),
            ((0, 2), c(-0.1, 0.2)),
            ((1, 3), c(0.9, 0.05)),
            ((2, 3), c(0.0, 1.1)),
        ];
        for ((r, cc), z) in entries {
            m[(r, cc)] = z;
            m[(cc, r)] = z.conj();
        }
        m
    }

    #[test]
    fn identity_spectrum() {
        let e = hermitian_eig(&ComplexMatrix::identity(3), 1e-12).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn diagonal_spectrum_is_sorted() {
        let e = hermitian_eig(&ComplexMatrix::from_real_diag(&[2.0, -1.0]), 1e-12).unwrap();
        assert_eq!(e.eigenvalues, vec![-1.0, 2.0]);
    }

    #[test]
    fn reconstruction_and_orthonormality() {
        let m = sample_hermitian();
        let e = hermitian_eig(&m, 1e-12).unwrap();
        assert!((&e.reconstruct() - &m).frobenius_norm() <= 1e-10);
        let vtv = &e.eigenvectors.adjoint() * &e.eigenvectors;
        assert!((&vtv - &ComplexMatrix::identity(4)).frobenius_norm() <= 1e-10);
        assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn trace_is_preserved_by_spectrum() {
        let m = sample_hermitian();
        let e = hermitian_eig(&m, 1e-12).unwrap();
        assert!(close(e.eigenvalues.iter().sum(), m.trace().re, 1e-12));
    }

    #[test]
    fn rejects_non_hermitian_and_non_square() {
        let mut m = ComplexMatrix::identity(2);
        m[(0, 1)] = c(0.5, 0.0);
        assert!(matches!(hermitian_eig(&m, 1e-9), Err(Error::NotHermitian { .. })));
        assert!(matches!(max_eigenvalue(&m), Err(Error::NotHermitian { .. })));
        let rect = ComplexMatrix::zeros(2, 3);
        assert!(matches!(hermitian_eig(&rect, 1e-9), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn max_eigenvalue_examples() {
        let ones = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]]).unwrap();
        assert!(close(max_eigenvalue(&ones).unwrap(), 2.0, 1e-14));

        let z = C64::from_polar(0.5, 0.9);
        let mut g = ComplexMatrix::identity(2);
        g[(0, 1)] = z;
        g[(1, 0)] = z.conj();
        assert!(close(max_eigenvalue(&g).unwrap(), 1.5, 1e-14));

        let s = std::f64::consts::FRAC_1_SQRT_2;
        let p = ComplexMatrix::projector(&[c(1.0, 0.0), c(0.0, 0.0)]);
        let q = ComplexMatrix::projector(&[c(s, 0.0), c(s, 0.0)]);
        assert!(close(max_eigenvalue(&(&p + &q)).unwrap(), 1.0 + s, 1e-14));
    }

    #[test]
    fn operator_norm_examples() {
        assert!(close(operator_norm(&ComplexMatrix::identity(5)), 1.0, 1e-14));
        assert_eq!(operator_norm(&ComplexMatrix::zeros(3, 3)), 0.0);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let p = ComplexMatrix::projector(&[c(1.0, 0.0), c(0.0, 0.0)]);
        let q = ComplexMatrix::projector(&[c(s, 0.0), c(s, 0.0)]);
        assert!(close(operator_norm(&(&p * &q)), s, 1e-14));
    }

    #[test]
    fn operator_norm_of_rectangular() {
        // [3 0 0; 0 4 0] has singular values 4, 3
        let m = ComplexMatrix::from_real_rows(&[&[3.0, 0.0, 0.0], &[0.0, 4.0, 0.0]]).unwrap();
        assert!(close(operator_norm(&m), 4.0, 1e-13));
    }

    #[test]
    fn psd_sqrt_examples() {
        let r = psd_sqrt(&ComplexMatrix::from_real_diag(&[4.0, 9.0]), PSD_CLAMP_TOL).unwrap();
        assert!((&r - &ComplexMatrix::from_real_diag(&[2.0, 3.0])).frobenius_norm() < 1e-14);

        let v = [c(0.6, 0.0), c(0.0, 0.8)];
        let p = ComplexMatrix::projector(&v);
        let r = psd_sqrt(&p, PSD_CLAMP_TOL).unwrap();
        assert!((&r - &p).frobenius_norm() < 1e-14);
    }

    #[test]
    fn psd_sqrt_clamps_small_negatives_and_rejects_large() {
        let r = psd_sqrt(&ComplexMatrix::from_real_diag(&[1.0, -5e-10]), PSD_CLAMP_TOL).unwrap();
        assert_eq!(r[(1, 1)], c(0.0, 0.0));
        let err = psd_sqrt(&ComplexMatrix::from_real_diag(&[1.0, -1e-6]), PSD_CLAMP_TOL).unwrap_err();
        assert!(matches!(err, Error::NotPositive { .. }));
    }

    #[test]
    fn kron_examples() {
        let i6 = kron(&ComplexMatrix::identity(2), &ComplexMatrix::identity(3));
        assert_eq!(i6, ComplexMatrix::identity(6));
        let d = ComplexMatrix::from_real_diag(&[1.0, 0.0]);
        assert_eq!(kron(&d, &d), ComplexMatrix::from_real_diag(&[1.0, 0.0, 0.0, 0.0]));
    }

    #[test]
    fn offdiag_frobenius_examples() {
        assert_eq!(offdiag_frobenius(&ComplexMatrix::identity(4)), 0.0);
        let ones = ComplexMatrix::from_fn(3, 3, |_, _| c(1.0, 0.0));
        assert!(close(offdiag_frobenius(&ones), 6f64.sqrt(), 1e-15));
    }

    #[test]
    fn json_round_trip_and_validation() {
        let m = sample_hermitian();
        let s = serde_json::to_string(&m).unwrap();
        assert!(s.starts_with("{\"rows\":4,\"cols\":4,\"re\":["));
        let back: ComplexMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);

        let bad = r#"{"rows":2,"cols":2,"re":[1,0,0],"im":[0,0,0]}"#;
        assert!(serde_json::from_str::<ComplexMatrix>(bad).is_err());
        let bad = r#"{"rows":1,"cols":1,"re":[1],"im":[]}"#;
        assert!(serde_json::from_str::<ComplexMatrix>(bad).is_err());
    }
}
