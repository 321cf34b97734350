//! Numerical tolerances shared by every module.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative Hermiticity residual accepted by the eigensolver.
    pub hermitian: f64,
    /// Hermiticity residual accepted for density matrices.
    pub state_hermitian: f64,
    /// |Tr(rho) - 1| accepted for density matrices.
    pub trace: f64,
    /// Eigenvalues in [-psd, 0) are clamped to zero; anything lower is an error.
    pub psd: f64,
    /// Largest imaginary part tolerated on quantities that are real analytically.
    pub imag: f64,
    /// Slack on Bell-diagonal eigenvalues before a Bloch triple is rejected.
    pub bloch: f64,
    /// Radicands this close below zero are treated as zero.
    pub radicand: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            hermitian: 1e-12,
            state_hermitian: 1e-10,
            trace: 1e-10,
            psd: 1e-8,
            imag: 1e-10,
            bloch: 1e-12,
            radicand: 1e-12,
        }
    }
}

impl Tolerances {
    pub const KEYS: [&'static str; 7] =
        ["hermitian", "state-hermitian", "trace", "psd", "imag", "bloch", "radicand"];

    /// Overrides one tolerance by its CLI key.
    pub fn set(&mut self, key: &str, value: f64) -> Result<()> {
        if !(value.is_finite() && value >= 0.0) {
            return Err(Error::OutOfRange { what: "tolerance", value });
        }
        let slot = match key {
            "hermitian" => &mut self.hermitian,
            "state-hermitian" | "state_hermitian" => &mut self.state_hermitian,
            "trace" => &mut self.trace,
            "psd" => &mut self.psd,
            "imag" => &mut self.imag,
            "bloch" => &mut self.bloch,
            "radicand" => &mut self.radicand,
            other => return Err(Error::Parse(format!("unknown tolerance key `{other}`"))),
        };
        *slot = value;
        Ok(())
    }
}

/// Square root that treats radicands in [-tol, 0) as zero and rejects anything lower.
pub(crate) fn clamped_sqrt(x: f64, tol: f64) -> Option<f64> {
    if x >= 0.0 {
        Some(x.sqrt())
    } else if x >= -tol {
        Some(0.0)
    } else {
        None
    }
}
