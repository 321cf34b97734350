//! Bipartite density matrices: validation, the standard families, pure states
//! and their Schmidt spectra, ancilla appending, and seeded random ensembles.

mod io;

pub use io::{read_state_file, state_from_json, state_to_json, write_state_file};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix, Subsystem, C64, ZERO};

/// A validated density matrix on C^m ⊗ C^n.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteState {
    dim_a: usize,
    dim_b: usize,
    rho: ComplexMatrix,
}

impl BipartiteState {
    /// Checks dimensions, Hermiticity, positivity and unit trace (in that order).
    pub fn validate(rho: ComplexMatrix, dim_a: usize, dim_b: usize) -> Result<Self> {
        Self::validate_with(rho, dim_a, dim_b, &Tolerances::default())
    }

    pub fn validate_with(rho: ComplexMatrix, dim_a: usize, dim_b: usize, tol: &Tolerances) -> Result<Self> {
        if dim_a == 0 || dim_b == 0 {
            return Err(Error::DimensionMismatch { expected: 1, found: 0 });
        }
        let rho = validate_density(&rho, dim_a * dim_b, tol)?;
        Ok(BipartiteState { dim_a, dim_b, rho })
    }

    /// Skips validation; only for matrices that are states by construction.
    pub(crate) fn from_parts(rho: ComplexMatrix, dim_a: usize, dim_b: usize) -> Self {
        debug_assert_eq!(rho.rows(), dim_a * dim_b);
        BipartiteState { dim_a, dim_b, rho }
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn dim(&self) -> usize {
        self.dim_a * self.dim_b
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.rho
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.rho
    }

    /// Tr(ρ²)
    pub fn purity(&self) -> f64 {
        linalg::frobenius_norm_sq(&self.rho)
    }

    pub fn marginal(&self, keep: Subsystem) -> ComplexMatrix {
        linalg::partial_trace(&self.rho, self.dim_a, self.dim_b, keep).expect("dimensions checked at construction")
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eig(&self.rho).expect("state is Hermitian").eigenvalues
    }

    pub fn sqrt(&self) -> Result<ComplexMatrix> {
        linalg::matrix_sqrt_psd(&self.rho)
    }

    /// (U ⊗ V) ρ (U ⊗ V)†
    pub fn apply_local_unitaries(&self, u: &ComplexMatrix, v: &ComplexMatrix) -> Result<Self> {
        if u.rows() != self.dim_a || v.rows() != self.dim_b {
            return Err(Error::DimensionMismatch { expected: self.dim_a, found: u.rows() });
        }
        let uv = linalg::kron(u, v);
        Ok(Self::from_parts(self.rho.conjugate_by(&uv).hermitian_part(), self.dim_a, self.dim_b))
    }

    /// The dominant eigenvector as a pure state when Tr ρ² is within `tol` of 1.
    pub fn as_pure(&self, tol: f64) -> Option<PureState> {
        if (self.purity() - 1.0).abs() > tol {
            return None;
        }
        let eig = linalg::hermitian_eig(&self.rho).ok()?;
        let top = eig.eigenvectors.column(self.dim() - 1);
        PureState::new(self.dim_a, self.dim_b, top).ok()
    }
}

/// Validates a single-system density matrix of side `dim`, returning its
/// Hermitian part (with tiny negative eigenvalues clamped away).
pub fn validate_density(m: &ComplexMatrix, dim: usize, tol: &Tolerances) -> Result<ComplexMatrix> {
    m.ensure_square()?;
    if m.rows() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: m.rows() });
    }
    let residual = m.hermiticity_residual();
    if residual > tol.state_hermitian {
        return Err(Error::NonHermitian { residual });
    }
    let h = m.hermitian_part();
    let eig = linalg::hermitian_eig_with(&h, 1.0)?;
    let min = eig.eigenvalues.first().copied().unwrap_or(0.0);
    if min < -tol.psd {
        return Err(Error::NotPsd { min_eigenvalue: min });
    }
    let trace = h.trace().re;
    if (trace - 1.0).abs() > tol.trace {
        return Err(Error::NotUnitTrace { trace });
    }
    if min < -linalg::roundoff_floor(&eig.eigenvalues) {
        let clamped = eig.apply(|x| x.max(0.0));
        let t = clamped.trace().re;
        return Ok(clamped.scale_real(1.0 / t));
    }
    Ok(h)
}

/// A unit vector in C^m ⊗ C^n, amplitudes indexed a * n + b.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dim_a: usize,
    dim_b: usize,
    amplitudes: Vec<C64>,
}

impl PureState {
    pub fn new(dim_a: usize, dim_b: usize, amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() != dim_a * dim_b {
            return Err(Error::DimensionMismatch { expected: dim_a * dim_b, found: amplitudes.len() });
        }
        let norm_sq: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sq.sqrt() - 1.0).abs() > 1e-12 {
            return Err(Error::OutOfRange { what: "state norm", value: norm_sq.sqrt() });
        }
        Ok(PureState { dim_a, dim_b, amplitudes })
    }

    /// Rescales to unit norm first.
    pub fn normalized(dim_a: usize, dim_b: usize, mut amplitudes: Vec<C64>) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::OutOfRange { what: "state norm", value: norm });
        }
        for z in amplitudes.iter_mut() {
            *z /= norm;
        }
        Self::new(dim_a, dim_b, amplitudes)
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn density(&self) -> BipartiteState {
        BipartiteState::from_parts(ComplexMatrix::outer(&self.amplitudes), self.dim_a, self.dim_b)
    }

    /// The amplitudes reshaped into an m × n matrix.
    pub fn coefficient_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_vec(self.dim_a, self.dim_b, self.amplitudes.clone()).expect("length checked")
    }

    /// (U ⊗ V)|ψ⟩
    pub fn apply_local_unitaries(&self, u: &ComplexMatrix, v: &ComplexMatrix) -> Self {
        let c = u.matmul(&self.coefficient_matrix()).matmul(&v.transpose());
        PureState { dim_a: self.dim_a, dim_b: self.dim_b, amplitudes: c.as_slice().to_vec() }
    }
}

/// Schmidt coefficients s_i (squared singular values), descending.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtSpectrum(pub Vec<f64>);

impl SchmidtSpectrum {
    pub fn coefficients(&self) -> &[f64] {
        &self.0
    }

    /// Σ s_i²
    pub fn sum_of_squares(&self) -> f64 {
        self.0.iter().map(|s| s * s).sum()
    }
}

pub fn schmidt_spectrum(psi: &PureState) -> SchmidtSpectrum {
    let sv = linalg::singular_values(&psi.coefficient_matrix());
    SchmidtSpectrum(sv.into_iter().map(|s| s * s).collect())
}

/// λ_ab for a Bloch triple, ordered (00, 01, 10, 11).
pub fn bell_diagonal_eigenvalues(c: [f64; 3]) -> [f64; 4] {
    let mut out = [0.0; 4];
    for a in 0..2 {
        for b in 0..2 {
            let sa = if a == 0 { 1.0 } else { -1.0 };
            let sb = if b == 0 { 1.0 } else { -1.0 };
            out[2 * a + b] = 0.25 * (1.0 + sa * c[0] - sa * sb * c[1] + sb * c[2]);
        }
    }
    out
}

/// |β_ab⟩ = (|0,b⟩ + (-1)^a |1,1⊕b⟩)/√2
pub fn bell_vector(a: usize, b: usize) -> Vec<C64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut v = vec![ZERO; 4];
    v[b] = C64::new(s, 0.0);
    v[2 + (1 - b)] = C64::new(if a == 0 { s } else { -s }, 0.0);
    v
}

/// ¼[𝟙⊗𝟙 + Σ c_i σ_i⊗σ_i]
pub fn bell_diagonal(c1: f64, c2: f64, c3: f64) -> Result<BipartiteState> {
    let lambdas = bell_diagonal_eigenvalues([c1, c2, c3]);
    let min = lambdas.iter().copied().fold(f64::INFINITY, f64::min);
    if min < -Tolerances::default().bloch || !min.is_finite() {
        return Err(Error::InvalidBlochVector { min_eigenvalue: min });
    }
    let mut rho = ComplexMatrix::identity(4);
    for (k, &ck) in [c1, c2, c3].iter().enumerate() {
        let p = linalg::pauli(k + 1);
        rho = &rho + &linalg::kron(&p, &p).scale_real(ck);
    }
    Ok(BipartiteState::from_parts(rho.scale_real(0.25), 2, 2))
}

/// (1-p)/4 𝟙 + p |β₁₁⟩⟨β₁₁|, p ∈ [-1/3, 1].
pub fn werner_two_qubit(p: f64) -> Result<BipartiteState> {
    if !(-1.0 / 3.0 - 1e-15..=1.0).contains(&p) {
        return Err(Error::OutOfRange { what: "Werner parameter p", value: p });
    }
    let singlet = ComplexMatrix::outer(&bell_vector(1, 1));
    let rho = &ComplexMatrix::identity(4).scale_real((1.0 - p) / 4.0) + &singlet.scale_real(p);
    Ok(BipartiteState::from_parts(rho, 2, 2))
}

/// The swap operator F|kl⟩ = |lk⟩ on C^m ⊗ C^m.
pub fn swap_operator(m: usize) -> ComplexMatrix {
    let mut f = ComplexMatrix::zeros(m * m, m * m);
    for k in 0..m {
        for l in 0..m {
            f[(k * m + l, l * m + k)] = C64::new(1.0, 0.0);
        }
    }
    f
}

/// m × m Werner state with flip expectation Tr(ωF) = x.
pub fn werner_general(m: usize, x: f64) -> Result<BipartiteState> {
    if m < 2 {
        return Err(Error::OutOfRange { what: "Werner dimension m", value: m as f64 });
    }
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::OutOfRange { what: "Werner parameter x", value: x });
    }
    let mf = m as f64;
    let denom = mf * mf * mf - mf;
    let rho = &ComplexMatrix::identity(m * m).scale_real((mf - x) / denom)
        + &swap_operator(m).scale_real((mf * x - 1.0) / denom);
    Ok(BipartiteState::from_parts(rho, m, m))
}

/// |Ψ⁺⟩ = Σ_i |ii⟩/√m
pub fn max_entangled_vector(m: usize) -> Vec<C64> {
    let mut v = vec![ZERO; m * m];
    let s = 1.0 / (m as f64).sqrt();
    for i in 0..m {
        v[i * m + i] = C64::new(s, 0.0);
    }
    v
}

/// m × m isotropic state with fidelity x to |Ψ⁺⟩:
/// (1-x)/(m²-1) (𝟙 - |Ψ⁺⟩⟨Ψ⁺|) + x |Ψ⁺⟩⟨Ψ⁺|.
pub fn isotropic(m: usize, x: f64) -> Result<BipartiteState> {
    if m < 2 {
        return Err(Error::OutOfRange { what: "isotropic dimension m", value: m as f64 });
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::OutOfRange { what: "isotropic parameter x", value: x });
    }
    let mf = m as f64;
    let p = ComplexMatrix::outer(&max_entangled_vector(m));
    let noise = (1.0 - x) / (mf * mf - 1.0);
    let rho = &ComplexMatrix::identity(m * m).scale_real(noise) + &p.scale_real(x - noise);
    Ok(BipartiteState::from_parts(rho, m, m))
}

/// Σ_k p_k |k⟩⟨k| ⊗ ρ_k
pub fn classical_quantum(probs: &[f64], states_b: &[ComplexMatrix]) -> Result<BipartiteState> {
    if probs.is_empty() || probs.len() != states_b.len() {
        return Err(Error::InvalidProbabilities(format!(
            "{} probabilities for {} states",
            probs.len(),
            states_b.len()
        )));
    }
    if let Some(&p) = probs.iter().find(|&&p| !p.is_finite() || p < -1e-12) {
        return Err(Error::InvalidProbabilities(format!("negative entry {p}")));
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidProbabilities(format!("sum is {total}")));
    }
    let n = states_b[0].rows();
    let tol = Tolerances::default();
    let m = probs.len();
    let mut rho = ComplexMatrix::zeros(m * n, m * n);
    for (k, (&p, s)) in probs.iter().zip(states_b).enumerate() {
        let s = validate_density(s, n, &tol)?;
        for i in 0..n {
            for j in 0..n {
                rho[(k * n + i, k * n + j)] = s[(i, j)] * p.max(0.0);
            }
        }
    }
    Ok(BipartiteState::from_parts(rho, m, n))
}

/// ρ_A ⊗ ρ_B
pub fn product_state(rho_a: &ComplexMatrix, rho_b: &ComplexMatrix) -> Result<BipartiteState> {
    let tol = Tolerances::default();
    let a = validate_density(rho_a, rho_a.rows(), &tol)?;
    let b = validate_density(rho_b, rho_b.rows(), &tol)?;
    Ok(BipartiteState::from_parts(linalg::kron(&a, &b), a.rows(), b.rows()))
}

/// ρ^{AB} ⊗ σ^C, regrouped as A : (B C).
pub fn append_ancilla(state: &BipartiteState, sigma: &ComplexMatrix) -> Result<BipartiteState> {
    let sigma = validate_density(sigma, sigma.rows(), &Tolerances::default())?;
    let dim_c = sigma.rows();
    Ok(BipartiteState::from_parts(linalg::kron(&state.rho, &sigma), state.dim_a, state.dim_b * dim_c))
}

fn gaussian_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let mut g = ComplexMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            g[(i, j)] = C64::new(re, im);
        }
    }
    g
}

/// Random density matrix of the given rank from the induced (Ginibre) measure.
pub fn random_state(dim_a: usize, dim_b: usize, rank: usize, seed: u64) -> Result<BipartiteState> {
    let n = dim_a * dim_b;
    if rank == 0 || rank > n {
        return Err(Error::OutOfRange { what: "rank", value: rank as f64 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = gaussian_matrix(n, rank, &mut rng);
    let gg = g.matmul(&g.adjoint());
    let t = gg.trace().re;
    Ok(BipartiteState::from_parts(gg.scale_real(1.0 / t).hermitian_part(), dim_a, dim_b))
}

/// Haar-random pure state.
pub fn random_pure_state(dim_a: usize, dim_b: usize, seed: u64) -> PureState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = gaussian_matrix(dim_a * dim_b, 1, &mut rng);
    PureState::normalized(dim_a, dim_b, g.column(0)).expect("gaussian vector is nonzero")
}

/// Haar-random unitary drawn from `rng`.
pub fn random_unitary<R: Rng>(d: usize, rng: &mut R) -> ComplexMatrix {
    let mut g = ComplexMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            g[(i, j)] = C64::new(re, im);
        }
    }
    linalg::orthonormalize_columns(&g)
}

pub fn random_unitary_seeded(d: usize, seed: u64) -> ComplexMatrix {
    random_unitary(d, &mut ChaCha8Rng::seed_from_u64(seed))
}
