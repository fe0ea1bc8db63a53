//! Dense complex linear algebra.
//!
//! Everything in the crate is expressed through [`CMatrix`], a row-major
//! dense complex matrix. The only decomposition provided is a cyclic Jacobi
//! eigensolver for Hermitian matrices; singular values are obtained from the
//! eigenvalues of `m†m`.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

const JACOBI_MAX_SWEEPS: usize = 100;
const JACOBI_REL_THRESHOLD: f64 = 1e-13;
const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows * cols != data.len() {
            return Err(Error::Shape(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(CMatrix { rows, cols, data })
    }

    /// Builds a matrix from real rows; panics on ragged input.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &x) in row.iter().enumerate() {
                m[(i, j)] = C64::new(x, 0.0);
            }
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        CMatrix { rows, cols, data }
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        m
    }

    /// Rank-one matrix unit `e_i e_j*`.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m[(i, j)] = ONE;
        m
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

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
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

    /// Largest entrywise modulus of `self - other`; shapes must agree.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |m_ij - conj(m_ji)|`, or infinity for non-square input.
    pub fn hermitian_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian_defect() <= HERMITIAN_TOL * (1.0 + self.max_abs())
    }

    /// `(m + m†)/2`.
    pub fn hermitian_part(&self) -> Self {
        assert!(self.is_square());
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] + self[(j, i)].conj()) * 0.5
        })
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])])
    }

    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        Self::from_fn(nr, nc, |i, j| self[(r0 + i, c0 + j)])
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, block: &CMatrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(r0 + i, c0 + j)] = block[(i, j)];
            }
        }
    }

    /// Block-diagonal direct sum.
    pub fn block_diag(blocks: &[&CMatrix]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(rows, cols);
        let (mut r, mut c) = (0, 0);
        for b in blocks {
            m.set_block(r, c, b);
            r += b.rows;
            c += b.cols;
        }
        m
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `m† v` without forming the adjoint.
    pub fn adjoint_mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![ZERO; self.cols];
        for (i, vi) in v.iter().enumerate() {
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o += a.conj() * vi;
            }
        }
        out
    }

    /// `m·d` for a real diagonal `d` (column scaling).
    pub fn mul_diag(&self, d: &[f64]) -> Self {
        assert_eq!(d.len(), self.cols);
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)] * d[j])
    }

    /// `d·m` for a real diagonal `d` (row scaling).
    pub fn diag_mul(&self, d: &[f64]) -> Self {
        assert_eq!(d.len(), self.rows);
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)] * d[i])
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for (k, a) in self.row(i).iter().enumerate() {
                if *a == ZERO {
                    continue;
                }
                for (o, b) in out_row.iter_mut().zip(rhs.row(k)) {
                    *o += a * b;
                }
            }
        }
        out
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &CMatrix {
    type Output = CMatrix;
    fn neg(self) -> CMatrix {
        self.scale_real(-1.0)
    }
}

/// `ab - ba`.
pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    &(a * b) - &(b * a)
}

#[derive(Clone, Debug)]
pub struct HermitianEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column `i` is the eigenvector of `values[i]`.
    pub vectors: CMatrix,
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Each rotation first removes the phase of the pivot `a_pq` with a diagonal
/// unitary, then applies the real symmetric Jacobi rotation. Sweeps stop once
/// the off-diagonal Frobenius mass drops below `1e-13 ‖m‖_F`.
pub fn hermitian_eigen(m: &CMatrix) -> Result<HermitianEigen> {
    check_hermitian(m)?;
    let (a, v) = jacobi(m, true)?;
    let v = v.expect("vectors requested");
    let n = m.rows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(HermitianEigen { values, vectors })
}

/// Eigenvalues only (ascending); skips eigenvector accumulation.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Result<Vec<f64>> {
    check_hermitian(m)?;
    let (a, _) = jacobi(m, false)?;
    let mut values: Vec<f64> = (0..m.rows()).map(|i| a[(i, i)].re).collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

fn check_hermitian(m: &CMatrix) -> Result<()> {
    if m.is_empty() {
        return Err(Error::Shape("empty matrix".into()));
    }
    if !m.is_square() {
        return Err(Error::Shape(format!(
            "expected a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    if !m.is_hermitian() {
        return Err(Error::NotHermitian(m.hermitian_defect()));
    }
    Ok(())
}

fn off_diagonal_norm(a: &CMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn jacobi(m: &CMatrix, want_vectors: bool) -> Result<(CMatrix, Option<CMatrix>)> {
    let n = m.rows();
    let mut a = m.hermitian_part();
    let mut v = want_vectors.then(|| CMatrix::identity(n));
    let threshold = JACOBI_REL_THRESHOLD * a.frobenius_norm();

    for _sweep in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&a) <= threshold {
            return Ok((a, v));
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                let phase = apq / r;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (2.0 * r);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // G = diag(1, conj(phase)) · [[c, s], [-s, c]]
                let gpp = C64::new(c, 0.0);
                let gpq = C64::new(s, 0.0);
                let gqp = -phase.conj() * s;
                let gqq = phase.conj() * c;
                rotate(&mut a, p, q, gpp, gpq, gqp, gqq);
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)].im = 0.0;
                a[(q, q)].im = 0.0;
                if let Some(v) = v.as_mut() {
                    rotate_columns(v, p, q, gpp, gpq, gqp, gqq);
                }
            }
        }
    }
    if off_diagonal_norm(&a) <= threshold {
        Ok((a, v))
    } else {
        Err(Error::NoConvergence {
            sweeps: JACOBI_MAX_SWEEPS,
            residual: off_diagonal_norm(&a),
        })
    }
}

#[allow(clippy::too_many_arguments)]
fn rotate_columns(a: &mut CMatrix, p: usize, q: usize, gpp: C64, gpq: C64, gqp: C64, gqq: C64) {
    for k in 0..a.rows() {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * gpp + akq * gqp;
        a[(k, q)] = akp * gpq + akq * gqq;
    }
}

/// `a ← G† a G` where `G` acts on the `(p, q)` plane.
#[allow(clippy::too_many_arguments)]
fn rotate(a: &mut CMatrix, p: usize, q: usize, gpp: C64, gpq: C64, gqp: C64, gqq: C64) {
    rotate_columns(a, p, q, gpp, gpq, gqp, gqq);
    let n = a.cols();
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = gpp.conj() * apk + gqp.conj() * aqk;
        a[(q, k)] = gpq.conj() * apk + gqq.conj() * aqk;
    }
}

/// Largest singular value.
///
/// Hermitian and skew-Hermitian inputs (every commutator of self-adjoint
/// operators is skew-Hermitian) are diagonalised directly; anything else goes
/// through the eigenvalues of the smaller of `m†m` and `mm†`.
pub fn operator_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    let scale = m.max_abs();
    if scale == 0.0 {
        return 0.0;
    }
    if m.is_square() {
        let tol = HERMITIAN_TOL * (1.0 + scale);
        if m.hermitian_defect() <= tol {
            return spectral_radius(m);
        }
        let im = m.scale(I);
        if im.hermitian_defect() <= tol {
            return spectral_radius(&im);
        }
    }
    let gram = if m.rows() >= m.cols() {
        &m.adjoint() * m
    } else {
        m * &m.adjoint()
    };
    let values = hermitian_eigenvalues(&gram.hermitian_part()).expect("Gram matrix is Hermitian");
    values.last().copied().unwrap_or(0.0).max(0.0).sqrt()
}

fn spectral_radius(h: &CMatrix) -> f64 {
    let values = hermitian_eigenvalues(&h.hermitian_part()).expect("checked Hermitian");
    values.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

/// `Σ |λ_i|^{-s}` over the eigenvalues of a Hermitian matrix.
pub fn spectral_power_trace(m: &CMatrix, s: f64) -> Result<f64> {
    if !(s > 0.0) {
        return Err(Error::InvalidArgument(format!("exponent must be positive, got {s}")));
    }
    let values = hermitian_eigenvalues(m)?;
    power_trace_of_values(&values, s)
}

pub(crate) fn power_trace_of_values(values: &[f64], s: f64) -> Result<f64> {
    let max = values.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    if let Some(&bad) = values
        .iter()
        .find(|v| v.abs() < 1e-12 * max || max == 0.0)
    {
        return Err(Error::Singular { eigenvalue: bad });
    }
    Ok(values.iter().map(|v| v.abs().powf(-s)).sum())
}

/// Top singular triple `(σ, u, v)` with `m v = σ u`, by power iteration on
/// `m†m` started from `warm` (or a fixed deterministic vector).
///
/// The returned `σ` is a Rayleigh-quotient estimate and never exceeds the true
/// operator norm (up to rounding).
pub fn top_singular_triple(
    m: &CMatrix,
    warm: Option<&[C64]>,
    max_iter: usize,
    rel_tol: f64,
) -> (f64, Vec<C64>, Vec<C64>) {
    let n = m.cols();
    let mut v: Vec<C64> = match warm {
        Some(w) if w.len() == n && w.iter().any(|z| z.norm() > 0.0) => w.to_vec(),
        _ => (0..n)
            .map(|i| C64::new(1.0 + 0.1 * (i as f64).sin(), 0.05 * (i as f64).cos()))
            .collect(),
    };
    normalize(&mut v);
    let mut sigma = 0.0;
    let mut mv = m.mul_vec(&v);
    for _ in 0..max_iter.max(1) {
        let next_sigma = norm(&mv);
        if next_sigma == 0.0 {
            return (0.0, vec![ZERO; m.rows()], v);
        }
        let mut w = m.adjoint_mul_vec(&mv);
        normalize(&mut w);
        v = w;
        mv = m.mul_vec(&v);
        let converged = (next_sigma - sigma).abs() <= rel_tol * next_sigma;
        sigma = next_sigma;
        if converged {
            break;
        }
    }
    sigma = norm(&mv);
    let u: Vec<C64> = if sigma > 0.0 {
        mv.iter().map(|z| z / sigma).collect()
    } else {
        vec![ZERO; m.rows()]
    };
    (sigma, u, v)
}

pub fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn normalize(v: &mut [C64]) {
    let n = norm(v);
    if n > 0.0 {
        for z in v.iter_mut() {
            *z /= n;
        }
    }
}

/// Lower Cholesky factor `L` with `m = L L†`, or `None` if `m` is not
/// numerically positive definite.
pub fn cholesky(m: &CMatrix) -> Option<CMatrix> {
    let n = m.rows();
    let mut l = CMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = m[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if !(d > 0.0) {
            return None;
        }
        let djj = d.sqrt();
        l[(j, j)] = C64::new(djj, 0.0);
        for i in (j + 1)..n {
            let mut s = m[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / djj;
        }
    }
    Some(l)
}

/// `log det` of `L L†` from its Cholesky factor.
pub fn cholesky_log_det(l: &CMatrix) -> f64 {
    (0..l.rows()).map(|i| 2.0 * l[(i, i)].re.ln()).sum()
}

/// `(L L†)^{-1}` from its Cholesky factor.
pub fn cholesky_inverse(l: &CMatrix) -> CMatrix {
    let n = l.rows();
    // Invert the triangular factor column by column, then form L^{-†} L^{-1}.
    let mut li = CMatrix::zeros(n, n);
    for c in 0..n {
        for i in c..n {
            let mut s = if i == c { ONE } else { ZERO };
            for k in c..i {
                s -= l[(i, k)] * li[(k, c)];
            }
            li[(i, c)] = s / l[(i, i)];
        }
    }
    let mut out = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let mut s = ZERO;
            for k in i..n {
                s += li[(k, i)].conj() * li[(k, j)];
            }
            out[(i, j)] = s;
            out[(j, i)] = s.conj();
        }
    }
    out
}

/// Solves `a x = b` for symmetric positive definite `a`.
pub fn solve_spd(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    let mut l = vec![vec![0.0; n]; n];
    for j in 0..n {
        let d = a[j][j] - l[j][..j].iter().map(|v| v * v).sum::<f64>();
        if !(d > 0.0) {
            return None;
        }
        let djj = d.sqrt();
        l[j][j] = djj;
        for i in (j + 1)..n {
            let s = a[i][j] - (0..j).map(|k| l[i][k] * l[j][k]).sum::<f64>();
            l[i][j] = s / djj;
        }
    }
    let mut y = vec![0.0; n];
    for i in 0..n {
        y[i] = (b[i] - (0..i).map(|k| l[i][k] * y[k]).sum::<f64>()) / l[i][i];
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        x[i] = (y[i] - ((i + 1)..n).map(|k| l[k][i] * x[k]).sum::<f64>()) / l[i][i];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_hermitian, random_matrix, random_unitary, seeded};

    #[test]
    fn diagonal_eigenvalues_sorted() {
        let e = hermitian_eigen(&CMatrix::from_real_diag(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(e.values, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn swap_matrix_eigenvalues() {
        let m = CMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let e = hermitian_eigen(&m).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-14);
        assert!((e.values[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn random_hermitian_reconstructs() {
        let mut rng = seeded(11);
        for n in [1, 2, 5, 8, 20] {
            let m = random_hermitian(n, &mut rng);
            let e = hermitian_eigen(&m).unwrap();
            let lhs = &m * &e.vectors;
            let rhs = e.vectors.mul_diag(&e.values);
            let residual = (&lhs - &rhs).frobenius_norm();
            assert!(residual <= 1e-10 * (1.0 + m.frobenius_norm()), "n={n} residual={residual}");
            let gram = &e.vectors.adjoint() * &e.vectors;
            assert!(gram.max_abs_diff(&CMatrix::identity(n)) <= 1e-10);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            hermitian_eigen(&CMatrix::zeros(2, 3)),
            Err(Error::Shape(_))
        ));
        assert!(matches!(
            hermitian_eigen(&CMatrix::zeros(0, 0)),
            Err(Error::Shape(_))
        ));
        let m = CMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(hermitian_eigen(&m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn operator_norm_examples() {
        assert_eq!(operator_norm(&CMatrix::zeros(3, 3)), 0.0);
        let mut rng = seeded(3);
        let u = random_unitary(4, &mut rng);
        assert!((operator_norm(&u) - 1.0).abs() < 1e-12);
        let nil = CMatrix::from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]]);
        assert!((operator_norm(&nil) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn operator_norm_rectangular_matches_both_gram_routes() {
        let mut rng = seeded(5);
        let m = random_matrix(3, 7, &mut rng);
        let a = operator_norm(&m);
        let b = operator_norm(&m.adjoint());
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn power_trace_examples() {
        let d = CMatrix::from_real_diag(&[1.0, 2.0]);
        assert!((spectral_power_trace(&d, 1.0).unwrap() - 1.5).abs() < 1e-15);
        assert!((spectral_power_trace(&CMatrix::identity(5), 7.0).unwrap() - 5.0).abs() < 1e-14);
        let diag: Vec<f64> = (1..=16).map(f64::from).collect();
        let oracle: f64 = (1..=16).map(|k| 1.0 / f64::from(k * k)).sum();
        let got = spectral_power_trace(&CMatrix::from_real_diag(&diag), 2.0).unwrap();
        assert!((got - oracle).abs() < 1e-13);
    }

    #[test]
    fn power_trace_rejects_singular() {
        let d = CMatrix::from_real_diag(&[1.0, 0.0, 3.0]);
        match spectral_power_trace(&d, 1.0) {
            Err(Error::Singular { eigenvalue }) => assert_eq!(eigenvalue, 0.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn power_iteration_matches_jacobi() {
        let mut rng = seeded(8);
        let m = random_matrix(6, 6, &mut rng);
        let (sigma, u, v) = top_singular_triple(&m, None, 2000, 1e-15);
        assert!((sigma - operator_norm(&m)).abs() < 1e-8);
        let mv = m.mul_vec(&v);
        for (a, b) in mv.iter().zip(&u) {
            assert!((a - b * sigma).norm() < 1e-10);
        }
    }

    #[test]
    fn cholesky_roundtrip_and_inverse() {
        let mut rng = seeded(11);
        let g = random_matrix(6, 6, &mut rng);
        let m = &(&g * &g.adjoint()) + &CMatrix::identity(6);
        let l = cholesky(&m).unwrap();
        assert!((&l * &l.adjoint()).max_abs_diff(&m) < 1e-12);
        let inv = cholesky_inverse(&l);
        assert!((&inv * &m).max_abs_diff(&CMatrix::identity(6)) < 1e-11);
        let eig = hermitian_eigenvalues(&m).unwrap();
        let ld: f64 = eig.iter().map(|v| v.ln()).sum();
        assert!((cholesky_log_det(&l) - ld).abs() < 1e-10);
        assert!(cholesky(&m.scale_real(-1.0)).is_none());
    }

    #[test]
    fn spd_solve() {
        let a = vec![vec![4.0, 1.0], vec![1.0, 3.0]];
        let x = solve_spd(&a, &[1.0, 2.0]).unwrap();
        assert!((4.0 * x[0] + x[1] - 1.0).abs() < 1e-14 && (x[0] + 3.0 * x[1] - 2.0).abs() < 1e-14);
    }
}
