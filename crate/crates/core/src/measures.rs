//! Affinity, measurement-induced states, and the three geometric discords.
//!
//! For a von Neumann measurement {Π_k} on A, all three per-basis functionals
//! reduce to block norms. Writing B_k(T) = (⟨k|⊗𝟙) T (|k⟩⊗𝟙),
//!
//! * affinity discord: 1 − Σ_k ‖B_k(√ρ)‖²
//! * Hilbert–Schmidt discord: ‖ρ‖² − Σ_k ‖B_k(ρ)‖² = ‖ρ − Π(ρ)‖²
//! * remedied discord: ‖√ρ‖² − Σ_k ‖B_k(√ρ)‖² = ‖√ρ − Π(√ρ)‖²
//!
//! and each discord is the minimum over measurement bases.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::correlation::gell_mann_basis;
use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix, Subsystem, C64, ZERO};
use crate::optimize::{nelder_mead, NelderMeadOptions};
use crate::states::{self, schmidt_spectrum, BipartiteState, PureState};

/// Rank-1 projectors |u_k⟩⟨u_k| onto an orthonormal basis of C^m.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementBasis {
    vectors: Vec<Vec<C64>>,
}

impl MeasurementBasis {
    /// Projectors onto the columns of a unitary.
    pub fn from_unitary(u: &ComplexMatrix) -> Self {
        MeasurementBasis { vectors: (0..u.cols()).map(|j| u.column(j)).collect() }
    }

    pub fn computational(m: usize) -> Self {
        Self::from_unitary(&ComplexMatrix::identity(m))
    }

    /// Qubit basis along polar angle θ and azimuth φ: Π_± = (𝟙 ± r̂·σ)/2.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
        let plus = vec![C64::new(c, 0.0), C64::from_polar(s, phi)];
        let minus = vec![-C64::from_polar(s, -phi), C64::new(c, 0.0)];
        MeasurementBasis { vectors: vec![plus, minus] }
    }

    /// Qubit basis along a unit Bloch vector.
    pub fn from_bloch(r: [f64; 3]) -> Self {
        let (theta, phi) = bloch_to_angles(r);
        Self::from_angles(theta, phi)
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Vec<C64>] {
        &self.vectors
    }

    pub fn projectors(&self) -> Vec<ComplexMatrix> {
        self.vectors.iter().map(|v| ComplexMatrix::outer(v)).collect()
    }

    /// Largest violation of Σ Π_k = 𝟙 and Π_k Π_l = δ_kl Π_k.
    pub fn completeness_residual(&self) -> f64 {
        let m = self.dim();
        let proj = self.projectors();
        let mut sum = ComplexMatrix::zeros(m, m);
        for p in &proj {
            sum = &sum + p;
        }
        let mut r = sum.max_abs_diff(&ComplexMatrix::identity(m));
        for (k, pk) in proj.iter().enumerate() {
            for (l, pl) in proj.iter().enumerate() {
                let prod = pk.matmul(pl);
                let expect = if k == l { pk.clone() } else { ComplexMatrix::zeros(m, m) };
                r = r.max(prod.max_abs_diff(&expect));
            }
        }
        r
    }
}

fn bloch_to_angles(r: [f64; 3]) -> (f64, f64) {
    let norm = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
    let theta = (r[2] / norm).clamp(-1.0, 1.0).acos();
    let phi = r[1].atan2(r[0]);
    (theta, phi)
}

fn angles_to_bloch(theta: f64, phi: f64) -> [f64; 3] {
    [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()]
}

/// How a discord value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ClosedPure,
    Closed2xN,
    Bound,
    OptimizedGrid,
    OptimizedLocal,
    FamilyAnalytic,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::ClosedPure => "closed-pure",
            Method::Closed2xN => "closed-2xn",
            Method::Bound => "bound",
            Method::OptimizedGrid => "optimized-grid",
            Method::OptimizedLocal => "optimized-local",
            Method::FamilyAnalytic => "family-analytic",
        }
    }
}

/// The measurement attaining a reported value, with whichever parametrization produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementParams {
    pub basis: MeasurementBasis,
    pub bloch: Option<[f64; 3]>,
    pub angles: Option<[f64; 2]>,
    /// Generator coefficients relative to the start basis (multistart search).
    pub generator: Option<Vec<f64>>,
    /// Index of the winning start (multistart search).
    pub start: Option<usize>,
}

impl MeasurementParams {
    pub fn from_basis(basis: MeasurementBasis) -> Self {
        MeasurementParams { basis, bloch: None, angles: None, generator: None, start: None }
    }

    pub fn from_bloch(r: [f64; 3], basis: MeasurementBasis) -> Self {
        let (theta, phi) = bloch_to_angles(r);
        MeasurementParams { bloch: Some(r), angles: Some([theta, phi]), ..Self::from_basis(basis) }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscordResult {
    pub value: f64,
    pub method: Method,
    pub optimal_measurement: Option<MeasurementParams>,
    pub evaluations: usize,
}

/// A(ρ, σ) = Tr(√ρ √σ)
pub fn affinity(rho: &ComplexMatrix, sigma: &ComplexMatrix) -> Result<f64> {
    rho.ensure_square()?;
    sigma.ensure_square()?;
    if rho.rows() != sigma.rows() {
        return Err(Error::DimensionMismatch { expected: rho.rows(), found: sigma.rows() });
    }
    let a = linalg::matrix_sqrt_psd(rho)?;
    let b = linalg::matrix_sqrt_psd(sigma)?;
    Ok(a.trace_product(&b).re)
}

/// d_A(ρ, σ) = √(1 − A(ρ, σ))
pub fn affinity_metric(rho: &ComplexMatrix, sigma: &ComplexMatrix) -> Result<f64> {
    Ok((1.0 - affinity(rho, sigma)?).max(0.0).sqrt())
}

fn check_basis(state: &BipartiteState, basis: &MeasurementBasis) -> Result<()> {
    if basis.dim() != state.dim_a() {
        return Err(Error::DimensionMismatch { expected: state.dim_a(), found: basis.dim() });
    }
    Ok(())
}

/// Σ_k (Π_k ⊗ 𝟙) T (Π_k ⊗ 𝟙) for an arbitrary operator T on C^m ⊗ C^n.
pub fn pinch(op: &ComplexMatrix, dim_b: usize, basis: &MeasurementBasis) -> ComplexMatrix {
    let n = op.rows();
    let mut out = ComplexMatrix::zeros(n, n);
    for p in basis.projectors() {
        let pk = linalg::kron(&p, &ComplexMatrix::identity(dim_b));
        out = &out + &pk.matmul(op).matmul(&pk);
    }
    out
}

/// Π^A(ρ): the state after measuring A in `basis` and forgetting the outcome.
pub fn post_measurement(state: &BipartiteState, basis: &MeasurementBasis) -> Result<BipartiteState> {
    check_basis(state, basis)?;
    let p = pinch(state.matrix(), state.dim_b(), basis).hermitian_part();
    Ok(BipartiteState::from_parts(p, state.dim_a(), state.dim_b()))
}

/// Σ_k ‖B_k(T)‖² with B_k(T) = (⟨u_k|⊗𝟙) T (|u_k⟩⊗𝟙), for Hermitian T.
fn block_weight(op: &ComplexMatrix, dim_a: usize, dim_b: usize, vectors: &[Vec<C64>]) -> f64 {
    let n = dim_b;
    let mut total = 0.0;
    let mut half = vec![ZERO; dim_a * n * n];
    for u in vectors {
        // half[a][b][b'] = Σ_{a'} T[(a,b),(a',b')] u[a']
        for a in 0..dim_a {
            for b in 0..n {
                for b2 in 0..n {
                    let mut acc = ZERO;
                    for (a2, &ua) in u.iter().enumerate() {
                        acc += op[(a * n + b, a2 * n + b2)] * ua;
                    }
                    half[(a * n + b) * n + b2] = acc;
                }
            }
        }
        for b in 0..n {
            for b2 in 0..n {
                let mut acc = ZERO;
                for (a, &ua) in u.iter().enumerate() {
                    acc += ua.conj() * half[(a * n + b) * n + b2];
                }
                total += acc.norm_sqr();
            }
        }
    }
    total
}

/// 1 − Σ_k Tr[√ρ (Π_k⊗𝟙) √ρ (Π_k⊗𝟙)]: the affinity discord candidate for one basis.
pub fn affinity_discord_at(state: &BipartiteState, basis: &MeasurementBasis) -> Result<f64> {
    check_basis(state, basis)?;
    let sqrt = state.sqrt()?;
    Ok(1.0 - block_weight(&sqrt, state.dim_a(), state.dim_b(), basis.vectors()))
}

/// ‖ρ − Π^A(ρ)‖²
pub fn hs_discord_at(state: &BipartiteState, basis: &MeasurementBasis) -> Result<f64> {
    check_basis(state, basis)?;
    let diff = state.matrix() - post_measurement(state, basis)?.matrix();
    Ok(linalg::frobenius_norm_sq(&diff))
}

/// ‖√ρ − Π^A(√ρ)‖²
pub fn remedied_discord_at(state: &BipartiteState, basis: &MeasurementBasis) -> Result<f64> {
    check_basis(state, basis)?;
    let sqrt = state.sqrt()?;
    let diff = &sqrt - &pinch(&sqrt, state.dim_b(), basis);
    Ok(linalg::frobenius_norm_sq(&diff))
}

/// Alternative readings of the affinity functional for one basis, kept for comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DefinitionForms {
    /// 1 − Σ_k Tr[√ρ Π_k √ρ Π_k] (the normative form).
    pub identity_form: f64,
    /// d_A²(ρ, Π(ρ)) = 1 − A(ρ, Π(ρ)).
    pub pinched_state_form: f64,
    /// Σ_k d_A²(ρ, Π_k ρ Π_k) over the unnormalized projected terms.
    pub projector_sum_form: f64,
}

pub fn definition_forms_at(state: &BipartiteState, basis: &MeasurementBasis) -> Result<DefinitionForms> {
    check_basis(state, basis)?;
    let identity_form = affinity_discord_at(state, basis)?;
    let pinched = post_measurement(state, basis)?;
    let pinched_state_form = 1.0 - affinity(state.matrix(), pinched.matrix())?;
    let sqrt = state.sqrt()?;
    let id_b = ComplexMatrix::identity(state.dim_b());
    let mut projector_sum_form = 0.0;
    for p in basis.projectors() {
        let pk = linalg::kron(&p, &id_b);
        let term = pk.matmul(state.matrix()).matmul(&pk).hermitian_part();
        let a = sqrt.trace_product(&linalg::matrix_sqrt_psd(&term)?).re;
        projector_sum_form += 1.0 - a;
    }
    Ok(DefinitionForms { identity_form, pinched_state_form, projector_sum_form })
}

/// 1 − Σ s_k² from the Schmidt spectrum.
pub fn pure_discord(psi: &PureState) -> DiscordResult {
    let s = schmidt_spectrum(psi);
    let marginal = psi.density().marginal(Subsystem::A);
    let basis = linalg::hermitian_eig(&marginal).ok().map(|e| MeasurementBasis::from_unitary(&e.eigenvectors));
    DiscordResult {
        value: 1.0 - s.sum_of_squares(),
        method: Method::ClosedPure,
        optimal_measurement: basis.map(MeasurementParams::from_basis),
        evaluations: 0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Measure {
    Affinity,
    HilbertSchmidt,
    Remedied,
}

impl Measure {
    pub const ALL: [Measure; 3] = [Measure::Affinity, Measure::HilbertSchmidt, Measure::Remedied];

    pub fn as_str(self) -> &'static str {
        match self {
            Measure::Affinity => "affinity",
            Measure::HilbertSchmidt => "hs",
            Measure::Remedied => "remedied",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "affinity" => Ok(Measure::Affinity),
            "hs" | "hilbert-schmidt" => Ok(Measure::HilbertSchmidt),
            "remedied" => Ok(Measure::Remedied),
            other => Err(Error::Parse(format!("unknown measure `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Qubit: the (θ, φ) grid. Larger A: Haar-random basis sampling.
    Grid,
    /// Seeded multistart Nelder–Mead over unitary generators.
    MultistartLocal,
    /// Qubit: grid then local refinement. Larger A: multistart.
    Hybrid,
}

impl Strategy {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "grid" => Ok(Strategy::Grid),
            "multistart" | "multistart-local" | "local" => Ok(Strategy::MultistartLocal),
            "hybrid" => Ok(Strategy::Hybrid),
            other => Err(Error::Parse(format!("unknown strategy `{other}`"))),
        }
    }
}

pub const MAX_OPTIMIZED_DIM_A: usize = 8;

#[derive(Debug, Clone)]
pub struct OptimizeOptions {
    pub strategy: Strategy,
    /// Total functional evaluations allowed.
    pub budget: usize,
    pub seed: u64,
    /// (θ points over [0, π], φ points over [0, 2π)).
    pub grid: (usize, usize),
    pub starts: usize,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        OptimizeOptions { strategy: Strategy::Hybrid, budget: 181 * 360 + 4000, seed: 0, grid: (181, 360), starts: 64 }
    }
}

/// Per-basis objective for one state and measure: value(basis) = offset − block_weight.
struct Objective {
    op: ComplexMatrix,
    offset: f64,
    dim_a: usize,
    dim_b: usize,
}

impl Objective {
    fn new(state: &BipartiteState, measure: Measure) -> Result<Self> {
        let (op, offset) = match measure {
            Measure::Affinity => (state.sqrt()?, 1.0),
            Measure::HilbertSchmidt => (state.matrix().clone(), state.purity()),
            Measure::Remedied => {
                let s = state.sqrt()?;
                let n = linalg::frobenius_norm_sq(&s);
                (s, n)
            }
        };
        Ok(Objective { op, offset, dim_a: state.dim_a(), dim_b: state.dim_b() })
    }

    fn value(&self, vectors: &[Vec<C64>]) -> f64 {
        self.offset - block_weight(&self.op, self.dim_a, self.dim_b, vectors)
    }
}

fn angle_vectors(theta: f64, phi: f64) -> Vec<Vec<C64>> {
    MeasurementBasis::from_angles(theta, phi).vectors
}

/// Minimizes the chosen discord functional over projective measurements on A.
pub fn optimize_discord(state: &BipartiteState, measure: Measure, opts: &OptimizeOptions) -> Result<DiscordResult> {
    let m = state.dim_a();
    if m > MAX_OPTIMIZED_DIM_A {
        return Err(Error::UnsupportedDimension(format!(
            "optimization supports dim_a <= {MAX_OPTIMIZED_DIM_A}, got {m}"
        )));
    }
    let objective = Objective::new(state, measure)?;
    if m == 1 {
        let basis = MeasurementBasis::computational(1);
        return Ok(DiscordResult {
            value: objective.value(basis.vectors()),
            method: Method::OptimizedGrid,
            optimal_measurement: Some(MeasurementParams::from_basis(basis)),
            evaluations: 1,
        });
    }
    match (m, opts.strategy) {
        (2, Strategy::Grid) => Ok(qubit_grid(&objective, opts, false)),
        (2, Strategy::Hybrid) => Ok(qubit_grid(&objective, opts, true)),
        (_, Strategy::Grid) => Ok(random_sampling(&objective, opts)),
        _ => multistart(state, &objective, opts),
    }
}

pub fn optimize_affinity_discord(state: &BipartiteState, opts: &OptimizeOptions) -> Result<DiscordResult> {
    optimize_discord(state, Measure::Affinity, opts)
}

pub fn optimize_hs_discord(state: &BipartiteState, opts: &OptimizeOptions) -> Result<DiscordResult> {
    optimize_discord(state, Measure::HilbertSchmidt, opts)
}

pub fn remedied_hs_discord(state: &BipartiteState, opts: &OptimizeOptions) -> Result<DiscordResult> {
    optimize_discord(state, Measure::Remedied, opts)
}

fn qubit_grid(objective: &Objective, opts: &OptimizeOptions, refine: bool) -> DiscordResult {
    let (nt, np) = (opts.grid.0.max(1), opts.grid.1.max(1));
    let mut evals = 0;
    let mut best = (f64::INFINITY, 0.0, 0.0);
    'grid: for i in 0..nt {
        let theta = if nt == 1 { 0.0 } else { std::f64::consts::PI * i as f64 / (nt - 1) as f64 };
        for j in 0..np {
            if evals >= opts.budget {
                break 'grid;
            }
            let phi = 2.0 * std::f64::consts::PI * j as f64 / np as f64;
            let v = objective.value(&angle_vectors(theta, phi));
            evals += 1;
            if v < best.0 {
                best = (v, theta, phi);
            }
        }
    }
    let mut method = Method::OptimizedGrid;
    if refine && evals < opts.budget {
        let step = std::f64::consts::PI / (nt.max(2) - 1) as f64;
        let nm = NelderMeadOptions { max_evals: opts.budget - evals, step, ftol_rel: 1e-12, restarts: 3 };
        let min = nelder_mead(|x| objective.value(&angle_vectors(x[0], x[1])), &[best.1, best.2], &nm);
        evals += min.evals;
        if min.f < best.0 {
            best = (min.f, min.x[0], min.x[1]);
        }
        method = Method::OptimizedLocal;
    }
    let (value, theta, phi) = best;
    let basis = MeasurementBasis::from_angles(theta, phi);
    DiscordResult {
        value,
        method,
        optimal_measurement: Some(MeasurementParams {
            bloch: Some(angles_to_bloch(theta, phi)),
            angles: Some([theta, phi]),
            ..MeasurementParams::from_basis(basis)
        }),
        evaluations: evals,
    }
}

fn start_rng(seed: u64, start: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (start as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn random_sampling(objective: &Objective, opts: &OptimizeOptions) -> DiscordResult {
    let m = objective.dim_a;
    let mut rng = start_rng(opts.seed, 0);
    let mut best: Option<(f64, ComplexMatrix)> = None;
    let mut evals = 0;
    while evals < opts.budget {
        let u = states::random_unitary(m, &mut rng);
        let v = objective.value(&MeasurementBasis::from_unitary(&u).vectors);
        evals += 1;
        if best.as_ref().is_none_or(|(b, _)| v < *b) {
            best = Some((v, u));
        }
    }
    let (value, u) = best.unwrap_or((f64::INFINITY, ComplexMatrix::identity(m)));
    DiscordResult {
        value,
        method: Method::OptimizedGrid,
        optimal_measurement: Some(MeasurementParams::from_basis(MeasurementBasis::from_unitary(&u))),
        evaluations: evals,
    }
}

/// U0 · exp(i Σ t_k G_k) over the traceless Gell-Mann generators G_k.
fn generated_unitary(u0: &ComplexMatrix, generators: &[ComplexMatrix], t: &[f64]) -> ComplexMatrix {
    let m = u0.rows();
    let mut h = ComplexMatrix::zeros(m, m);
    for (g, &tk) in generators.iter().zip(t) {
        if tk != 0.0 {
            h = &h + &g.scale_real(tk);
        }
    }
    u0.matmul(&linalg::unitary_exp(&h).expect("generator sum is Hermitian"))
}

fn multistart(state: &BipartiteState, objective: &Objective, opts: &OptimizeOptions) -> Result<DiscordResult> {
    let m = objective.dim_a;
    let generators: Vec<ComplexMatrix> = gell_mann_basis(m)?.operators()[1..].to_vec();
    let starts = opts.starts.max(1);
    let per_start = opts.budget / starts;
    let marginal_basis = linalg::hermitian_eig(&state.marginal(Subsystem::A))?.eigenvectors;

    let runs: Vec<(f64, Vec<f64>, ComplexMatrix, usize)> = (0..starts)
        .into_par_iter()
        .map(|k| {
            let u0 = match k {
                0 => marginal_basis.clone(),
                1 => ComplexMatrix::identity(m),
                _ => states::random_unitary(m, &mut start_rng(opts.seed, k)),
            };
            let nm = NelderMeadOptions { max_evals: per_start, step: 0.4, ftol_rel: 1e-12, restarts: 3 };
            let x0 = vec![0.0; generators.len()];
            let min = nelder_mead(
                |t| objective.value(&MeasurementBasis::from_unitary(&generated_unitary(&u0, &generators, t)).vectors),
                &x0,
                &nm,
            );
            (min.f, min.x, u0, min.evals)
        })
        .collect();

    let evaluations = runs.iter().map(|r| r.3).sum();
    let mut best_idx = None;
    for (k, r) in runs.iter().enumerate() {
        if r.3 > 0 && best_idx.is_none_or(|b: usize| r.0 < runs[b].0) {
            best_idx = Some(k);
        }
    }
    let Some(k) = best_idx else {
        return Ok(DiscordResult {
            value: f64::INFINITY,
            method: Method::OptimizedLocal,
            optimal_measurement: None,
            evaluations,
        });
    };
    let (value, t, u0, _) = &runs[k];
    let basis = MeasurementBasis::from_unitary(&generated_unitary(u0, &generators, t));
    let bloch = (m == 2).then(|| {
        let p = ComplexMatrix::outer(&basis.vectors[0]);
        [1, 2, 3].map(|i| p.trace_product(&linalg::pauli(i)).re)
    });
    Ok(DiscordResult {
        value: *value,
        method: Method::OptimizedLocal,
        optimal_measurement: Some(MeasurementParams {
            basis,
            bloch,
            angles: None,
            generator: Some(t.clone()),
            start: Some(k),
        }),
        evaluations,
    })
}

/// Affinity and Hilbert–Schmidt discord before and after appending σ to B.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AncillaReport {
    pub affinity_before: f64,
    pub affinity_after: f64,
    pub hs_before: f64,
    pub hs_after: f64,
    pub purity_sigma: f64,
}

impl AncillaReport {
    /// hs_after / hs_before; NaN when the HS discord vanishes.
    pub fn hs_ratio(&self) -> f64 {
        self.hs_after / self.hs_before
    }
}

pub fn ancilla_behavior_report(
    state: &BipartiteState,
    sigma: &ComplexMatrix,
    opts: &OptimizeOptions,
) -> Result<AncillaReport> {
    let enlarged = states::append_ancilla(state, sigma)?;
    let purity_sigma = linalg::frobenius_norm_sq(sigma);
    Ok(AncillaReport {
        affinity_before: optimize_discord(state, Measure::Affinity, opts)?.value,
        affinity_after: optimize_discord(&enlarged, Measure::Affinity, opts)?.value,
        hs_before: optimize_discord(state, Measure::HilbertSchmidt, opts)?.value,
        hs_after: optimize_discord(&enlarged, Measure::HilbertSchmidt, opts)?.value,
        purity_sigma,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{bell_vector, classical_quantum, random_state, werner_two_qubit};

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    fn bell() -> BipartiteState {
        PureState::new(2, 2, bell_vector(0, 0)).unwrap().density()
    }

    #[test]
    fn affinity_examples() {
        let rho = random_state(2, 2, 3, 4).unwrap();
        close(affinity(rho.matrix(), rho.matrix()).unwrap(), 1.0, 1e-12);
        let zero = ComplexMatrix::from_diagonal(&[1.0, 0.0]);
        let one = ComplexMatrix::from_diagonal(&[0.0, 1.0]);
        close(affinity(&zero, &one).unwrap(), 0.0, 1e-15);
        let half = ComplexMatrix::identity(2).scale_real(0.5);
        close(affinity(&half, &zero).unwrap(), std::f64::consts::FRAC_1_SQRT_2, 1e-14);
        assert!(matches!(affinity(&half, rho.matrix()), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(affinity(&half, &linalg::pauli(3)), Err(Error::NotPsd { .. })));
    }

    #[test]
    fn affinity_metric_examples() {
        let rho = random_state(2, 2, 2, 5).unwrap();
        close(affinity_metric(rho.matrix(), rho.matrix()).unwrap(), 0.0, 1e-6);
        let zero = ComplexMatrix::from_diagonal(&[1.0, 0.0]);
        let one = ComplexMatrix::from_diagonal(&[0.0, 1.0]);
        close(affinity_metric(&zero, &one).unwrap(), 1.0, 1e-15);
        let half = ComplexMatrix::identity(2).scale_real(0.5);
        close(affinity_metric(&half, &zero).unwrap(), (1.0 - std::f64::consts::FRAC_1_SQRT_2).sqrt(), 1e-14);
        close(affinity_metric(&half, &zero).unwrap(), 0.54120, 1e-5);
    }

    #[test]
    fn basis_constructors_are_complete() {
        assert!(MeasurementBasis::from_angles(0.7, 2.1).completeness_residual() < 1e-14);
        assert!(MeasurementBasis::from_bloch([0.0, 0.6, 0.8]).completeness_residual() < 1e-14);
        let u = states::random_unitary_seeded(4, 1);
        assert!(MeasurementBasis::from_unitary(&u).completeness_residual() < 1e-12);
        // Bloch vector of the first projector is r̂.
        let b = MeasurementBasis::from_bloch([0.6, 0.0, 0.8]);
        let p = ComplexMatrix::outer(&b.vectors()[0]);
        close(p.trace_product(&linalg::pauli(1)).re, 0.6, 1e-14);
        close(p.trace_product(&linalg::pauli(3)).re, 0.8, 1e-14);
    }

    #[test]
    fn post_measurement_examples() {
        let b = post_measurement(&bell(), &MeasurementBasis::computational(2)).unwrap();
        assert!(b.matrix().max_abs_diff(&ComplexMatrix::from_diagonal(&[0.5, 0.0, 0.0, 0.5])) < 1e-15);

        let cq = classical_quantum(
            &[0.4, 0.6],
            &[
                ComplexMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]).unwrap(),
                ComplexMatrix::from_diagonal(&[0.2, 0.8]),
            ],
        )
        .unwrap();
        let same = post_measurement(&cq, &MeasurementBasis::computational(2)).unwrap();
        assert!(same.matrix().max_abs_diff(cq.matrix()) < 1e-15);

        let s = random_state(3, 2, 6, 8).unwrap();
        let basis = MeasurementBasis::from_unitary(&states::random_unitary_seeded(3, 2));
        let once = post_measurement(&s, &basis).unwrap();
        let twice = post_measurement(&once, &basis).unwrap();
        close(once.matrix().trace().re, 1.0, 1e-13);
        assert!(twice.matrix().max_abs_diff(once.matrix()) <= 1e-12);
        assert!(post_measurement(&s, &MeasurementBasis::computational(2)).is_err());
    }

    #[test]
    fn per_basis_functional_examples() {
        close(affinity_discord_at(&bell(), &MeasurementBasis::computational(2)).unwrap(), 0.5, 1e-12);

        let mixed = BipartiteState::validate(ComplexMatrix::identity(4).scale_real(0.25), 2, 2).unwrap();
        let basis = MeasurementBasis::from_angles(1.1, 0.3);
        close(affinity_discord_at(&mixed, &basis).unwrap(), 0.0, 1e-14);

        let a = ComplexMatrix::from_real_rows(&[&[0.7, 0.3], &[0.3, 0.3]]).unwrap();
        let prod = states::product_state(&a, &ComplexMatrix::from_diagonal(&[0.6, 0.4])).unwrap();
        let eig = linalg::hermitian_eig(&a).unwrap();
        let own = MeasurementBasis::from_unitary(&eig.eigenvectors);
        close(affinity_discord_at(&prod, &own).unwrap(), 0.0, 1e-12);
    }

    #[test]
    fn block_weight_matches_explicit_pinching() {
        for seed in 0..4 {
            let s = random_state(3, 2, 4, seed).unwrap();
            let basis = MeasurementBasis::from_unitary(&states::random_unitary_seeded(3, seed + 10));
            let hs_explicit = hs_discord_at(&s, &basis).unwrap();
            let hs_blocks = Objective::new(&s, Measure::HilbertSchmidt).unwrap().value(basis.vectors());
            close(hs_explicit, hs_blocks, 1e-13);
            let rem_explicit = remedied_discord_at(&s, &basis).unwrap();
            let rem_blocks = Objective::new(&s, Measure::Remedied).unwrap().value(basis.vectors());
            close(rem_explicit, rem_blocks, 1e-12);
            // explicit trace form of the affinity identity
            let sq = s.sqrt().unwrap();
            let id = ComplexMatrix::identity(2);
            let direct: f64 = basis
                .projectors()
                .iter()
                .map(|p| {
                    let pk = linalg::kron(p, &id);
                    sq.matmul(&pk).matmul(&sq).matmul(&pk).trace().re
                })
                .sum();
            close(affinity_discord_at(&s, &basis).unwrap(), 1.0 - direct, 1e-12);
        }
    }

    #[test]
    fn definition_forms_agree_on_invariant_bases() {
        let cq = classical_quantum(
            &[0.25, 0.75],
            &[ComplexMatrix::from_diagonal(&[0.3, 0.7]), ComplexMatrix::from_real_rows(&[&[0.5, 0.1], &[0.1, 0.5]]).unwrap()],
        )
        .unwrap();
        let f = definition_forms_at(&cq, &MeasurementBasis::computational(2)).unwrap();
        close(f.identity_form, 0.0, 1e-8);
        close(f.pinched_state_form, 0.0, 1e-8);
    }

    #[test]
    fn definition_forms_differ_on_bell_state() {
        // √Π(ρ) ≠ Π(√ρ) in general: for the Bell state in the computational basis
        // the identity form gives 1/2 while 1 − A(ρ, Π(ρ)) = 1 − 1/√2.
        let f = definition_forms_at(&bell(), &MeasurementBasis::computational(2)).unwrap();
        close(f.identity_form, 0.5, 1e-12);
        close(f.pinched_state_form, 1.0 - std::f64::consts::FRAC_1_SQRT_2, 1e-8);
        // Each projected term has affinity Tr(ρ √(ρ/2)) = 1/2^{3/2}.
        close(f.projector_sum_form, 2.0 * (1.0 - 0.5f64.powf(1.5)), 1e-8);
    }

    #[test]
    fn pure_discord_examples() {
        let one = C64::new(1.0, 0.0);
        let prod = PureState::new(2, 3, vec![ZERO, one, ZERO, ZERO, ZERO, ZERO]).unwrap();
        close(pure_discord(&prod).value, 0.0, 1e-15);
        close(pure_discord(&PureState::new(2, 2, bell_vector(0, 0)).unwrap()).value, 0.5, 1e-15);
        let amp = vec![C64::new(3f64.sqrt() / 2.0, 0.0), ZERO, ZERO, C64::new(0.5, 0.0)];
        let r = pure_discord(&PureState::new(2, 2, amp).unwrap());
        close(r.value, 3.0 / 8.0, 1e-15);
        assert_eq!(r.method, Method::ClosedPure);
    }

    #[test]
    fn optimizer_on_werner_and_classical_quantum() {
        let opts = OptimizeOptions::default();
        let r = optimize_affinity_discord(&werner_two_qubit(1.0).unwrap(), &opts).unwrap();
        close(r.value, 0.5, 1e-5);
        assert_eq!(r.method, Method::OptimizedLocal);

        let cq = classical_quantum(
            &[0.5, 0.5],
            &[ComplexMatrix::from_diagonal(&[0.9, 0.1]), ComplexMatrix::from_real_rows(&[&[0.5, 0.4], &[0.4, 0.5]]).unwrap()],
        )
        .unwrap();
        // Rotate so the optimum is not on a grid point.
        let u = states::random_unitary_seeded(2, 77);
        let cq = cq.apply_local_unitaries(&u, &ComplexMatrix::identity(2)).unwrap();
        let r = optimize_affinity_discord(&cq, &opts).unwrap();
        assert!(r.value.abs() < 1e-6, "{}", r.value);
    }

    #[test]
    fn hs_optimizer_on_werner() {
        for p in [0.2, 0.6, 1.0] {
            let r = optimize_hs_discord(&werner_two_qubit(p).unwrap(), &OptimizeOptions::default()).unwrap();
            close(r.value, p * p / 2.0, 1e-5);
        }
    }

    #[test]
    fn remedied_equals_hs_on_pure_states() {
        let psi = states::random_pure_state(2, 2, 3).density();
        let opts = OptimizeOptions::default();
        let rem = remedied_hs_discord(&psi, &opts).unwrap().value;
        let hs = optimize_hs_discord(&psi, &opts).unwrap().value;
        close(rem, hs, 1e-6);
    }

    #[test]
    fn grid_budget_is_monotone() {
        let s = random_state(2, 2, 3, 21).unwrap();
        let mut last = f64::INFINITY;
        for budget in [1, 10, 100, 1000, 20000, 65160, 66000, 70000] {
            let opts = OptimizeOptions { budget, ..Default::default() };
            let r = optimize_affinity_discord(&s, &opts).unwrap();
            assert!(r.evaluations <= budget);
            assert!(r.value <= last + 1e-15, "budget {budget}: {} > {last}", r.value);
            last = r.value;
        }
    }

    #[test]
    fn multistart_on_qubits_matches_grid() {
        let s = random_state(2, 3, 4, 13).unwrap();
        let grid = optimize_affinity_discord(&s, &OptimizeOptions::default()).unwrap();
        let ms = optimize_affinity_discord(
            &s,
            &OptimizeOptions { strategy: Strategy::MultistartLocal, budget: 8 * 800, starts: 8, ..Default::default() },
        )
        .unwrap();
        close(grid.value, ms.value, 1e-7);
        assert!(ms.optimal_measurement.unwrap().bloch.is_some());
    }

    #[test]
    fn multistart_is_deterministic() {
        let s = random_state(3, 2, 3, 2).unwrap();
        let opts = OptimizeOptions { strategy: Strategy::MultistartLocal, budget: 8 * 600, starts: 8, seed: 5, ..Default::default() };
        let a = optimize_affinity_discord(&s, &opts).unwrap();
        let b = optimize_affinity_discord(&s, &opts).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn random_sampling_never_beats_multistart() {
        let s = random_state(3, 3, 4, 6).unwrap();
        let ms = optimize_affinity_discord(
            &s,
            &OptimizeOptions { strategy: Strategy::MultistartLocal, budget: 16 * 1500, starts: 16, ..Default::default() },
        )
        .unwrap();
        let grid = optimize_affinity_discord(&s, &OptimizeOptions { strategy: Strategy::Grid, budget: 3000, ..Default::default() })
            .unwrap();
        assert!(grid.value >= ms.value - 1e-9);
        assert_eq!(grid.method, Method::OptimizedGrid);
    }

    #[test]
    fn unsupported_dimension() {
        let s = states::werner_general(9, 0.1).unwrap();
        assert!(matches!(
            optimize_affinity_discord(&s, &OptimizeOptions::default()),
            Err(Error::UnsupportedDimension(_))
        ));
    }

    #[test]
    fn ancilla_report_examples() {
        let w = werner_two_qubit(1.0).unwrap();
        let opts = OptimizeOptions::default();
        let r = ancilla_behavior_report(&w, &ComplexMatrix::identity(2).scale_real(0.5), &opts).unwrap();
        close(r.affinity_before, 0.5, 2e-5);
        close(r.affinity_after, 0.5, 2e-5);
        close(r.hs_after, 0.25, 2e-5);
        close(r.purity_sigma, 0.5, 1e-15);

        let r = ancilla_behavior_report(&w, &ComplexMatrix::from_diagonal(&[0.9, 0.1]), &opts).unwrap();
        close(r.hs_ratio(), 0.82, 2e-5);
        close(r.affinity_after / r.affinity_before, 1.0, 2e-5);

        let pure = ComplexMatrix::from_diagonal(&[0.0, 1.0]);
        let r = ancilla_behavior_report(&w, &pure, &opts).unwrap();
        close(r.hs_after, r.hs_before, 2e-5);
        close(r.affinity_after, r.affinity_before, 2e-5);
    }
}
