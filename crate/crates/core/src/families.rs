//! Closed-form discords for Bell-diagonal, Werner and isotropic states, and
//! parameter sweeps that compare them against the optimizer.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::config::{clamped_sqrt, Tolerances};
use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix};
use crate::measures::{optimize_discord, Measure, OptimizeOptions};
use crate::states::{self, BipartiteState};

/// Spectrum of a Bell-diagonal state and the coefficients of its square root,
/// √ρ = ¼[h 𝟙⊗𝟙 + Σ d_j σ_j⊗σ_j].
#[derive(Debug, Clone, PartialEq)]
pub struct BellDiagonalSpectrum {
    /// λ_ab ordered (00, 01, 10, 11).
    pub lambdas: [f64; 4],
    pub h: f64,
    pub d: [f64; 3],
}

impl BellDiagonalSpectrum {
    pub fn from_bloch(c: [f64; 3]) -> Result<Self> {
        let lambdas = states::bell_diagonal_eigenvalues(c);
        let tol = Tolerances::default().bloch;
        let floor = linalg::roundoff_floor(&lambdas);
        let mut roots = [0.0; 4];
        for (r, &l) in roots.iter_mut().zip(&lambdas) {
            let l = if l.abs() <= floor { 0.0 } else { l };
            *r = clamped_sqrt(l, tol).ok_or(Error::InvalidBlochVector { min_eigenvalue: l })?;
        }
        let [r00, r01, r10, r11] = roots;
        Ok(BellDiagonalSpectrum {
            lambdas,
            h: roots.iter().sum(),
            // ⟨σ_j⊗σ_j⟩ on |β_ab⟩ is (-1)^a, -(-1)^(a+b), (-1)^b for j = 1, 2, 3.
            d: [r00 + r01 - r10 - r11, -r00 + r01 + r10 - r11, r00 - r01 + r10 - r11],
        })
    }

    /// ¼[h 𝟙⊗𝟙 + Σ d_j σ_j⊗σ_j]
    pub fn sqrt_state(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::identity(4).scale_real(self.h);
        for (j, &dj) in self.d.iter().enumerate() {
            let p = linalg::pauli(j + 1);
            m = &m + &linalg::kron(&p, &p).scale_real(dj);
        }
        m.scale_real(0.25)
    }

    pub fn affinity_discord(&self) -> f64 {
        let dmax = self.d.iter().map(|d| d * d).fold(0.0, f64::max);
        1.0 - 0.25 * (self.h * self.h + dmax)
    }
}

/// 1 − ¼(h² + max_j d_j²)
pub fn bell_diagonal_discord(c1: f64, c2: f64, c3: f64) -> Result<f64> {
    Ok(BellDiagonalSpectrum::from_bloch([c1, c2, c3])?.affinity_discord())
}

/// Hilbert–Schmidt discord of a Bell-diagonal state: ¼(Σ c_j² − max_j c_j²).
pub fn bell_diagonal_hs_discord(c1: f64, c2: f64, c3: f64) -> Result<f64> {
    BellDiagonalSpectrum::from_bloch([c1, c2, c3])?;
    let sq = [c1 * c1, c2 * c2, c3 * c3];
    Ok(0.25 * (sq.iter().sum::<f64>() - sq.iter().copied().fold(0.0, f64::max)))
}

/// (affinity, Hilbert–Schmidt) discord of the two-qubit Werner state.
pub fn werner_two_qubit_discords(p: f64) -> Result<(f64, f64)> {
    if !(-1.0 / 3.0 - 1e-15..=1.0).contains(&p) {
        return Err(Error::OutOfRange { what: "Werner parameter p", value: p });
    }
    let tol = Tolerances::default().radicand;
    let root = clamped_sqrt((1.0 - p) * (1.0 + 3.0 * p), tol)
        .ok_or(Error::OutOfRange { what: "Werner parameter p", value: p })?;
    Ok((0.25 * (1.0 + p - root), p * p / 2.0))
}

fn check_family(m: usize, x: f64, lo: f64, what: &'static str) -> Result<()> {
    if m < 2 {
        return Err(Error::OutOfRange { what: "family dimension m", value: m as f64 });
    }
    if !(lo..=1.0).contains(&x) {
        return Err(Error::OutOfRange { what, value: x });
    }
    Ok(())
}

fn clamp_negative_roundoff(v: f64, tol: f64) -> f64 {
    if (-tol..0.0).contains(&v) {
        0.0
    } else {
        v
    }
}

/// (affinity, Hilbert–Schmidt) discord of the m × m Werner state with Tr(ωF) = x.
pub fn werner_general_discords(m: usize, x: f64) -> Result<(f64, f64)> {
    check_family(m, x, -1.0, "Werner parameter x")?;
    let tol = Tolerances::default().radicand;
    let mf = m as f64;
    let root = clamped_sqrt((mf - 1.0) / (mf + 1.0) * (1.0 - x * x), tol).unwrap_or(0.0);
    let affinity = clamp_negative_roundoff(0.5 * ((mf - x) / (mf + 1.0) - root), tol);
    let hs = (mf * x - 1.0).powi(2) / (mf * (mf - 1.0) * (mf + 1.0).powi(2));
    Ok((affinity, hs))
}

/// m → ∞ limit of the Werner affinity discord: ½(1 − √(1 − x²)).
pub fn werner_affinity_limit(x: f64) -> f64 {
    0.5 * (1.0 - (1.0 - x * x).max(0.0).sqrt())
}

/// Which closed form to use for the isotropic Hilbert–Schmidt discord.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IsotropicHsForm {
    /// (m²x − 1)² / (m(m−1)(m+1)²); tends to x² as m → ∞.
    #[default]
    Squared,
    /// (m²x − 1) / (m(m−1)(m+1)²), the first-power expression, kept for comparison.
    Printed,
}

/// (affinity, Hilbert–Schmidt) discord of the m × m isotropic state with fidelity x.
pub fn isotropic_discords(m: usize, x: f64) -> Result<(f64, f64)> {
    isotropic_discords_with(m, x, IsotropicHsForm::Squared)
}

pub fn isotropic_discords_with(m: usize, x: f64, form: IsotropicHsForm) -> Result<(f64, f64)> {
    check_family(m, x, 0.0, "isotropic parameter x")?;
    let mf = m as f64;
    let diff = ((mf - 1.0) * x).sqrt() - ((1.0 - x) / (mf + 1.0)).sqrt();
    let affinity = diff * diff / mf;
    let num = mf * mf * x - 1.0;
    let denom = mf * (mf - 1.0) * (mf + 1.0).powi(2);
    let hs = match form {
        IsotropicHsForm::Squared => num * num / denom,
        IsotropicHsForm::Printed => num / denom,
    };
    Ok((affinity, hs))
}

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// Two-qubit Werner state, parameter p ∈ [−1/3, 1].
    Werner2,
    /// Bell-diagonal states c = t · direction, parameter t.
    BellDiagonal { direction: [f64; 3] },
    /// m × m Werner state, parameter x ∈ [−1, 1].
    Werner { m: usize },
    /// m × m isotropic state, parameter x ∈ [0, 1].
    Isotropic { m: usize },
}

impl Family {
    /// Parses `werner2`, `belldiag`, `werner` or `isotropic`.
    pub fn parse(tag: &str, m: usize, direction: [f64; 3]) -> Result<Self> {
        match tag {
            "werner2" => Ok(Family::Werner2),
            "belldiag" | "bell-diagonal" => Ok(Family::BellDiagonal { direction }),
            "werner" => Ok(Family::Werner { m }),
            "isotropic" => Ok(Family::Isotropic { m }),
            other => Err(Error::UnknownFamily(other.to_string())),
        }
    }

    pub fn tag(&self) -> String {
        match self {
            Family::Werner2 => "werner2".into(),
            Family::BellDiagonal { .. } => "belldiag".into(),
            Family::Werner { m } => format!("werner{m}x{m}"),
            Family::Isotropic { m } => format!("isotropic{m}x{m}"),
        }
    }

    pub fn state(&self, t: f64) -> Result<BipartiteState> {
        match *self {
            Family::Werner2 => states::werner_two_qubit(t),
            Family::BellDiagonal { direction: d } => states::bell_diagonal(t * d[0], t * d[1], t * d[2]),
            Family::Werner { m } => states::werner_general(m, t),
            Family::Isotropic { m } => states::isotropic(m, t),
        }
    }

    /// Closed-form value; the remedied discord coincides with the affinity discord.
    pub fn analytic(&self, t: f64, measure: Measure) -> Result<f64> {
        let (aff, hs) = match *self {
            Family::Werner2 => werner_two_qubit_discords(t)?,
            Family::BellDiagonal { direction: d } => {
                let c = [t * d[0], t * d[1], t * d[2]];
                (bell_diagonal_discord(c[0], c[1], c[2])?, bell_diagonal_hs_discord(c[0], c[1], c[2])?)
            }
            Family::Werner { m } => werner_general_discords(m, t)?,
            Family::Isotropic { m } => isotropic_discords(m, t)?,
        };
        Ok(match measure {
            Measure::Affinity | Measure::Remedied => aff,
            Measure::HilbertSchmidt => hs,
        })
    }
}

/// `steps` evenly spaced points from `from` to `to` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamGrid {
    pub from: f64,
    pub to: f64,
    pub steps: usize,
}

impl ParamGrid {
    pub fn points(&self) -> Result<Vec<f64>> {
        if self.steps == 0 || !self.from.is_finite() || !self.to.is_finite() {
            return Err(Error::OutOfRange { what: "grid steps", value: self.steps as f64 });
        }
        if self.steps == 1 {
            return Ok(vec![self.from]);
        }
        let h = (self.to - self.from) / (self.steps - 1) as f64;
        Ok((0..self.steps)
            .map(|i| if i + 1 == self.steps { self.to } else { self.from + h * i as f64 })
            .collect())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub family: String,
    pub param: f64,
    pub measure: Measure,
    pub analytic: f64,
    pub optimized: Option<f64>,
}

impl SweepRow {
    pub fn gap(&self) -> Option<f64> {
        self.optimized.map(|o| (o - self.analytic).abs())
    }
}

#[derive(Debug, Clone, Default)]
pub struct SweepOptions {
    pub optimizer: OptimizeOptions,
    /// Skip the optimizer column (large m).
    pub analytic_only: bool,
}

/// One row per (grid point, measure), ordered by grid index then measure.
pub fn sweep(family: &Family, grid: &ParamGrid, measures: &[Measure], opts: &SweepOptions) -> Result<Vec<SweepRow>> {
    let points = grid.points()?;
    // Reject out-of-domain points before launching any optimization.
    for &t in &points {
        if opts.analytic_only {
            family.analytic(t, Measure::Affinity)?;
        } else {
            family.state(t)?;
        }
    }
    let tag = family.tag();
    let per_point: Vec<Result<Vec<SweepRow>>> = points
        .par_iter()
        .map(|&t| {
            let state = if opts.analytic_only { None } else { Some(family.state(t)?) };
            measures
                .iter()
                .map(|&measure| {
                    let analytic = family.analytic(t, measure)?;
                    let optimized = match &state {
                        Some(state) => Some(optimize_discord(state, measure, &opts.optimizer)?.value),
                        None => None,
                    };
                    Ok(SweepRow { family: tag.clone(), param: t, measure, analytic, optimized })
                })
                .collect()
        })
        .collect();
    let mut rows = Vec::with_capacity(points.len() * measures.len());
    for r in per_point {
        rows.extend(r?);
    }
    Ok(rows)
}

fn sig12(x: f64) -> String {
    format!("{x:.11e}")
}

pub const CSV_HEADER: &str = "family,param,measure,analytic,optimized,gap";

pub fn rows_to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let opt = r.optimized.map(sig12).unwrap_or_default();
        let gap = r.gap().map(sig12).unwrap_or_default();
        let _ = writeln!(out, "{},{},{},{},{},{}", r.family, sig12(r.param), r.measure.as_str(), sig12(r.analytic), opt, gap);
    }
    out
}
