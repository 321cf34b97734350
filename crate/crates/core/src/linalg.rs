//! Dense complex linear algebra on small square matrices.
//!
//! Everything here works on [`ComplexMatrix`], a row-major `Vec<Complex64>`.
//! Dimensions in this crate stay below ~64 per subsystem, so the eigensolver
//! is a cyclic complex Jacobi iteration: slow asymptotically, but accurate to
//! machine precision on the sizes we care about.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| {
                    let z = self[(i, j)];
                    format!("{:+.6}{:+.6}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, found: data.len() });
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    /// Builds a matrix from nested rows; every row must have the same length.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let n = rows.len();
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, found: r.len() });
            }
            data.extend_from_slice(r);
        }
        Ok(ComplexMatrix { rows: n, cols, data })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<C64>> =
            rows.iter().map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect()).collect();
        Self::from_rows(&rows)
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        m
    }

    /// The projector |v><v| (no normalization applied).
    pub fn outer(v: &[C64]) -> Self {
        let n = v.len();
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = v[i] * v[j].conj();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Side length; callers only use this on square matrices.
    pub fn dim(&self) -> usize {
        self.rows
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn ensure_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NonSquare { rows: self.rows, cols: self.cols })
        }
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)];
            }
        }
        m
    }

    pub fn scale(&self, s: C64) -> Self {
        ComplexMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&z| z * s).collect() }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Tr(A B) without forming the product.
    pub fn trace_product(&self, other: &Self) -> C64 {
        assert_eq!(self.cols, other.rows);
        assert_eq!(self.rows, other.cols);
        let mut acc = ZERO;
        for i in 0..self.rows {
            for k in 0..self.cols {
                acc += self[(i, k)] * other[(k, i)];
            }
        }
        acc
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// max_ij |M_ij - conj(M_ji)|
    pub fn hermiticity_residual(&self) -> f64 {
        let mut r: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                r = r.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        r
    }

    pub fn is_hermitian(&self, rel_tol: f64) -> bool {
        self.is_square() && self.hermiticity_residual() <= rel_tol * self.max_abs().max(1.0)
    }

    /// (M + M†)/2
    pub fn hermitian_part(&self) -> Self {
        let mut m = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = (self[(i, j)] + self[(j, i)].conj()) * 0.5;
            }
        }
        m
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Conjugation U M U†.
    pub fn conjugate_by(&self, u: &Self) -> Self {
        u.matmul(self).matmul(&u.adjoint())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        ComplexMatrix { rows: self.rows, cols: self.cols, data }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        ComplexMatrix { rows: self.rows, cols: self.cols, data }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

/// Pauli matrices, indexed 0..3 as (I, X, Y, Z).
pub fn pauli(k: usize) -> ComplexMatrix {
    let i = C64::new(0.0, 1.0);
    let data = match k {
        0 => vec![ONE, ZERO, ZERO, ONE],
        1 => vec![ZERO, ONE, ONE, ZERO],
        2 => vec![ZERO, -i, i, ZERO],
        3 => vec![ONE, ZERO, ZERO, -ONE],
        _ => panic!("pauli index {k} out of range"),
    };
    ComplexMatrix { rows: 2, cols: 2, data }
}

/// Eigenvalues ascending, eigenvectors as the columns of a unitary matrix.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// V f(Λ) V†
    pub fn apply<F: Fn(f64) -> f64>(&self, f: F) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let mut out = ComplexMatrix::zeros(n, n);
        for k in 0..n {
            let fk = f(self.eigenvalues[k]);
            if fk == 0.0 {
                continue;
            }
            for i in 0..n {
                let vik = v[(i, k)] * fk;
                for j in 0..n {
                    out[(i, j)] += vik * v[(j, k)].conj();
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.apply(|x| x)
    }
}

/// Parameters of the 2x2 unitary rotation that annihilates the (p, q) element
/// of the Hermitian block [[app, apq], [conj(apq), aqq]]: returns (c, s, e)
/// with J_pp = J_qq = c, J_pq = s e, J_qp = -s conj(e).
fn jacobi_rotation(app: f64, aqq: f64, apq: C64) -> (f64, f64, C64) {
    let mag = apq.norm();
    let e = apq / mag;
    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau == 0.0 { 1.0 } else { tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt()) };
    let c = 1.0 / (1.0 + t * t).sqrt();
    (c, t * c, e)
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<EigenDecomposition> {
    hermitian_eig_with(m, crate::config::Tolerances::default().hermitian)
}

pub fn hermitian_eig_with(m: &ComplexMatrix, rel_tol: f64) -> Result<EigenDecomposition> {
    m.ensure_square()?;
    let residual = m.hermiticity_residual();
    if residual > rel_tol * m.max_abs().max(1.0) {
        return Err(Error::NonHermitian { residual });
    }
    let n = m.rows;
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.max_abs().max(f64::MIN_POSITIVE);

    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq.norm() <= 1e-300 {
                    continue;
                }
                let (c, s, e) = jacobi_rotation(a[(p, p)].re, a[(q, q)].re, apq);
                let se = e * s;
                let se_conj = e.conj() * s;
                // columns: A <- A J
                for i in 0..n {
                    let aip = a[(i, p)];
                    let aiq = a[(i, q)];
                    a[(i, p)] = aip * c - aiq * se_conj;
                    a[(i, q)] = aip * se + aiq * c;
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip * c - viq * se_conj;
                    v[(i, q)] = vip * se + viq * c;
                }
                // rows: A <- J† A
                for j in 0..n {
                    let apj = a[(p, j)];
                    let aqj = a[(q, j)];
                    a[(p, j)] = apj * c - aqj * se;
                    a[(q, j)] = apj * se_conj + aqj * c;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n, n);
    for (new, &old) in order.iter().enumerate() {
        for i in 0..n {
            eigenvectors[(i, new)] = v[(i, old)];
        }
    }
    Ok(EigenDecomposition { eigenvalues, eigenvectors })
}

/// Principal square root of a numerically PSD Hermitian matrix.
///
/// Eigenvalues in `[-psd_tol, 0)` are clamped to zero first; a more negative
/// eigenvalue yields [`Error::NotPsd`].
pub fn matrix_sqrt_psd(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    matrix_sqrt_psd_with(m, &crate::config::Tolerances::default())
}

pub fn matrix_sqrt_psd_with(m: &ComplexMatrix, tol: &crate::config::Tolerances) -> Result<ComplexMatrix> {
    let eig = hermitian_eig_with(m, tol.hermitian.max(tol.state_hermitian))?;
    let min = eig.eigenvalues.first().copied().unwrap_or(0.0);
    if min < -tol.psd {
        return Err(Error::NotPsd { min_eigenvalue: min });
    }
    let floor = roundoff_floor(&eig.eigenvalues);
    Ok(eig.apply(|x| if x <= floor { 0.0 } else { x.sqrt() }))
}

/// Eigenvalues at or below this magnitude are indistinguishable from zero.
///
/// The square root amplifies an absolute eigenvalue error of ε into √ε, so
/// exactly rank-deficient inputs (pure states, family endpoints) need their
/// roundoff-level eigenvalues snapped to zero before the square root.
pub fn roundoff_floor(eigenvalues: &[f64]) -> f64 {
    let scale = eigenvalues.iter().map(|x| x.abs()).fold(0.0, f64::max);
    64.0 * f64::EPSILON * scale
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ra, ca, rb, cb) = (a.rows, a.cols, b.rows, b.cols);
    let mut out = ComplexMatrix::zeros(ra * rb, ca * cb);
    for i in 0..ra {
        for j in 0..ca {
            let aij = a[(i, j)];
            if aij == ZERO {
                continue;
            }
            for k in 0..rb {
                for l in 0..cb {
                    out[(i * rb + k, j * cb + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

pub fn kron_vec(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter().flat_map(|&x| b.iter().map(move |&y| x * y)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Traces out one factor of an (dim_a * dim_b)-dimensional operator, keeping `keep`.
pub fn partial_trace(m: &ComplexMatrix, dim_a: usize, dim_b: usize, keep: Subsystem) -> Result<ComplexMatrix> {
    m.ensure_square()?;
    if m.rows != dim_a * dim_b {
        return Err(Error::DimensionMismatch { expected: dim_a * dim_b, found: m.rows });
    }
    let out = match keep {
        Subsystem::A => {
            let mut r = ComplexMatrix::zeros(dim_a, dim_a);
            for a in 0..dim_a {
                for a2 in 0..dim_a {
                    r[(a, a2)] = (0..dim_b).map(|b| m[(a * dim_b + b, a2 * dim_b + b)]).sum();
                }
            }
            r
        }
        Subsystem::B => {
            let mut r = ComplexMatrix::zeros(dim_b, dim_b);
            for b in 0..dim_b {
                for b2 in 0..dim_b {
                    r[(b, b2)] = (0..dim_a).map(|a| m[(a * dim_b + b, a * dim_b + b2)]).sum();
                }
            }
            r
        }
    };
    Ok(out)
}

pub fn frobenius_norm_sq(m: &ComplexMatrix) -> f64 {
    m.data.iter().map(|z| z.norm_sqr()).sum()
}

/// Singular values (descending) of a rectangular matrix by one-sided Jacobi.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    // Work on the orientation with at least as many rows as columns.
    let a = if m.rows >= m.cols { m.clone() } else { m.adjoint() };
    let (rows, cols) = (a.rows, a.cols);
    let mut colsv: Vec<Vec<C64>> = (0..cols).map(|j| a.column(j)).collect();

    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let alpha: f64 = colsv[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = colsv[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: C64 = colsv[p].iter().zip(&colsv[q]).map(|(x, y)| x.conj() * y).sum();
                if gamma.norm() <= 1e-15 * (alpha * beta).sqrt() || gamma.norm() <= 1e-300 {
                    continue;
                }
                rotated = true;
                let (c, s, e) = jacobi_rotation(alpha, beta, gamma);
                let se = e * s;
                let se_conj = e.conj() * s;
                for i in 0..rows {
                    let xp = colsv[p][i];
                    let xq = colsv[q][i];
                    colsv[p][i] = xp * c - xq * se_conj;
                    colsv[q][i] = xp * se + xq * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = colsv.iter().map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Orthonormalizes the columns of a square matrix (modified Gram–Schmidt).
///
/// Applied to a complex Ginibre matrix this yields a Haar-distributed unitary,
/// since Gram–Schmidt fixes the diagonal of R to be real positive.
pub fn orthonormalize_columns(m: &ComplexMatrix) -> ComplexMatrix {
    let n = m.cols;
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| m.column(j)).collect();
    for j in 0..n {
        for k in 0..j {
            let (done, rest) = cols.split_at_mut(j);
            let proj: C64 = done[k].iter().zip(&rest[0]).map(|(x, y)| x.conj() * y).sum();
            for (y, x) in rest[0].iter_mut().zip(&done[k]) {
                *y -= proj * x;
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for y in cols[j].iter_mut() {
            *y /= norm;
        }
    }
    let mut out = ComplexMatrix::zeros(m.rows, n);
    for (j, c) in cols.iter().enumerate() {
        for (i, &z) in c.iter().enumerate() {
            out[(i, j)] = z;
        }
    }
    out
}

/// exp(i H) for Hermitian H.
pub fn unitary_exp(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eig_with(h, 1e-10)?;
    let n = h.rows;
    let v = &eig.eigenvectors;
    let mut out = ComplexMatrix::zeros(n, n);
    for k in 0..n {
        let phase = C64::from_polar(1.0, eig.eigenvalues[k]);
        for i in 0..n {
            let vik = v[(i, k)] * phase;
            for j in 0..n {
                out[(i, j)] += vik * v[(j, k)].conj();
            }
        }
    }
    Ok(out)
}
