//! Operator bases and the correlation matrix of √ρ.
//!
//! With orthonormal Hermitian bases {X_i} on A and {Y_j} on B, the square
//! root of a state expands as √ρ = Σ γ_ij X_i ⊗ Y_j. The spectrum of ΓΓᵗ
//! gives a lower bound on the affinity discord for any m × n state, and for
//! m = 2 the split Γ = (v; Z) gives it exactly.

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix, C64, ZERO};
use crate::measures::{DiscordResult, MeasurementBasis, MeasurementParams, Method};
use crate::states::BipartiteState;

/// Orthonormal Hermitian basis of d × d operators, identity/√d first.
#[derive(Debug, Clone)]
pub struct OperatorBasis {
    dim: usize,
    operators: Vec<ComplexMatrix>,
}

impl OperatorBasis {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    /// Gram matrix Tr(X_i† X_j).
    pub fn gram(&self) -> ComplexMatrix {
        let n = self.operators.len();
        let mut g = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            let xi = self.operators[i].adjoint();
            for j in 0..n {
                g[(i, j)] = xi.trace_product(&self.operators[j]);
            }
        }
        g
    }
}

/// Generalized Gell-Mann basis: 𝟙/√d, then symmetric, antisymmetric and
/// diagonal generators, each with unit Hilbert–Schmidt norm.
pub fn gell_mann_basis(d: usize) -> Result<OperatorBasis> {
    if d < 2 {
        return Err(Error::OutOfRange { what: "basis dimension", value: d as f64 });
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut ops = Vec::with_capacity(d * d);
    ops.push(ComplexMatrix::identity(d).scale_real(1.0 / (d as f64).sqrt()));
    for j in 0..d {
        for k in (j + 1)..d {
            let mut m = ComplexMatrix::zeros(d, d);
            m[(j, k)] = C64::new(s, 0.0);
            m[(k, j)] = C64::new(s, 0.0);
            ops.push(m);
        }
    }
    for j in 0..d {
        for k in (j + 1)..d {
            let mut m = ComplexMatrix::zeros(d, d);
            m[(j, k)] = C64::new(0.0, -s);
            m[(k, j)] = C64::new(0.0, s);
            ops.push(m);
        }
    }
    for l in 1..d {
        let norm = 1.0 / ((l * (l + 1)) as f64).sqrt();
        let mut diag = vec![norm; l];
        diag.push(-(l as f64) * norm);
        diag.resize(d, 0.0);
        ops.push(ComplexMatrix::from_diagonal(&diag));
    }
    Ok(OperatorBasis { dim: d, operators: ops })
}

/// Γ = (γ_ij), γ_ij = Tr(√ρ X_i ⊗ Y_j), stored row-major (m² × n²).
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    dim_a: usize,
    dim_b: usize,
    gamma: Vec<f64>,
}

/// Γ split into its first row v and the remaining rows Z (m = 2 only).
#[derive(Debug, Clone, PartialEq)]
pub struct GammaPartition {
    pub v: Vec<f64>,
    pub z: [Vec<f64>; 3],
}

impl CorrelationMatrix {
    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn rows(&self) -> usize {
        self.dim_a * self.dim_a
    }

    pub fn cols(&self) -> usize {
        self.dim_b * self.dim_b
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.gamma[i * self.cols() + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.gamma[i * self.cols()..(i + 1) * self.cols()]
    }

    /// Σ γ_ij², equal to Tr ρ.
    pub fn sum_of_squares(&self) -> f64 {
        self.gamma.iter().map(|g| g * g).sum()
    }

    /// ΓΓᵗ as a (real symmetric) complex matrix.
    pub fn gram(&self) -> ComplexMatrix {
        let r = self.rows();
        let mut g = ComplexMatrix::zeros(r, r);
        for i in 0..r {
            for k in i..r {
                let dot: f64 = self.row(i).iter().zip(self.row(k)).map(|(a, b)| a * b).sum();
                g[(i, k)] = C64::new(dot, 0.0);
                g[(k, i)] = C64::new(dot, 0.0);
            }
        }
        g
    }

    /// Σ γ_ij X_i ⊗ Y_j
    pub fn reconstruct(&self, basis_a: &OperatorBasis, basis_b: &OperatorBasis) -> ComplexMatrix {
        let n = self.dim_a * self.dim_b;
        let mut out = ComplexMatrix::zeros(n, n);
        for (i, x) in basis_a.operators().iter().enumerate() {
            for (j, y) in basis_b.operators().iter().enumerate() {
                let g = self.get(i, j);
                if g != 0.0 {
                    out = &out + &linalg::kron(x, y).scale_real(g);
                }
            }
        }
        out
    }

    pub fn partition(&self) -> Result<GammaPartition> {
        if self.dim_a != 2 {
            return Err(Error::WrongDimension { expected: 2, found: self.dim_a });
        }
        Ok(GammaPartition {
            v: self.row(0).to_vec(),
            z: [self.row(1).to_vec(), self.row(2).to_vec(), self.row(3).to_vec()],
        })
    }
}

impl GammaPartition {
    pub fn v_norm_sq(&self) -> f64 {
        self.v.iter().map(|x| x * x).sum()
    }

    /// ZZᵗ (3 × 3).
    pub fn zzt(&self) -> [[f64; 3]; 3] {
        let mut out = [[0.0; 3]; 3];
        for i in 0..3 {
            for k in 0..3 {
                out[i][k] = self.z[i].iter().zip(&self.z[k]).map(|(a, b)| a * b).sum();
            }
        }
        out
    }
}

pub fn correlation_matrix(
    state: &BipartiteState,
    basis_a: &OperatorBasis,
    basis_b: &OperatorBasis,
) -> Result<CorrelationMatrix> {
    let sqrt = state.sqrt()?;
    correlation_matrix_of(&sqrt, state.dim_a(), state.dim_b(), basis_a, basis_b)
}

/// Expansion coefficients of an arbitrary Hermitian operator on C^m ⊗ C^n.
pub fn correlation_matrix_of(
    op: &ComplexMatrix,
    dim_a: usize,
    dim_b: usize,
    basis_a: &OperatorBasis,
    basis_b: &OperatorBasis,
) -> Result<CorrelationMatrix> {
    if basis_a.dim() != dim_a {
        return Err(Error::DimensionMismatch { expected: dim_a, found: basis_a.dim() });
    }
    if basis_b.dim() != dim_b {
        return Err(Error::DimensionMismatch { expected: dim_b, found: basis_b.dim() });
    }
    let imag_tol = Tolerances::default().imag;
    let (m, n) = (dim_a, dim_b);
    let mut gamma = Vec::with_capacity(m * m * n * n);
    for x in basis_a.operators() {
        // T[b, b'] = Σ_{a,a'} op[(a,b),(a',b')] X[a',a], so γ_ij = Tr(T Y_j).
        let mut t = ComplexMatrix::zeros(n, n);
        for a in 0..m {
            for a2 in 0..m {
                let xa = x[(a2, a)];
                if xa == ZERO {
                    continue;
                }
                for b in 0..n {
                    for b2 in 0..n {
                        t[(b, b2)] += op[(a * n + b, a2 * n + b2)] * xa;
                    }
                }
            }
        }
        for y in basis_b.operators() {
            let g = t.trace_product(y);
            if g.im.abs() > imag_tol {
                return Err(Error::NonHermitian { residual: g.im.abs() });
            }
            gamma.push(g.re);
        }
    }
    Ok(CorrelationMatrix { dim_a, dim_b, gamma })
}

/// Γ in the Gell-Mann bases of both parties.
pub fn gell_mann_correlation(state: &BipartiteState) -> Result<CorrelationMatrix> {
    correlation_matrix(state, &gell_mann_basis(state.dim_a())?, &gell_mann_basis(state.dim_b())?)
}

/// The spectral lower bound 1 − Σ_{i<m} μ_i, with μ the eigenvalues of ΓΓᵗ
/// in decreasing order. Not clamped; see [`LowerBound::clamped`].
#[derive(Debug, Clone, PartialEq)]
pub struct LowerBound {
    pub value: f64,
    /// All eigenvalues of ΓΓᵗ, decreasing.
    pub eigenvalues: Vec<f64>,
}

impl LowerBound {
    pub fn clamped(&self) -> f64 {
        self.value.max(0.0)
    }
}

pub fn lower_bound(state: &BipartiteState) -> Result<LowerBound> {
    lower_bound_from(&gell_mann_correlation(state)?)
}

pub fn lower_bound_from(gamma: &CorrelationMatrix) -> Result<LowerBound> {
    let mut eigenvalues = linalg::hermitian_eig(&gamma.gram())?.eigenvalues;
    eigenvalues.reverse();
    let top: f64 = eigenvalues.iter().take(gamma.dim_a()).sum();
    Ok(LowerBound { value: 1.0 - top, eigenvalues })
}

/// Exact affinity discord of a 2 × n state: 1 − ‖v‖² − λ_max(ZZᵗ).
pub fn closed_form_2xn(state: &BipartiteState) -> Result<DiscordResult> {
    if state.dim_a() != 2 {
        return Err(Error::WrongDimension { expected: 2, found: state.dim_a() });
    }
    let part = gell_mann_correlation(state)?.partition()?;
    let zzt = part.zzt();
    let rows: Vec<&[f64]> = zzt.iter().map(|r| r.as_slice()).collect();
    let eig = linalg::hermitian_eig(&ComplexMatrix::from_real_rows(&rows)?)?;
    let z_max = eig.eigenvalues[2];
    let top = eig.eigenvectors.column(2);
    let mut r = [top[0].re, top[1].re, top[2].re];
    let norm = r.iter().map(|x| x * x).sum::<f64>().sqrt();
    r.iter_mut().for_each(|x| *x /= norm);
    let basis = MeasurementBasis::from_bloch(r);
    Ok(DiscordResult {
        value: 1.0 - part.v_norm_sq() - z_max,
        method: Method::Closed2xN,
        optimal_measurement: Some(MeasurementParams::from_bloch(r, basis)),
        evaluations: 1,
    })
}
