//! JSON state files:
//! `{"dim_a": m, "dim_b": n, "matrix": [[{"re": r, "im": i}, ...], ...]}`.

use std::fmt::Write as _;
use std::path::Path;

use serde::Deserialize;

use super::BipartiteState;
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};

#[derive(Deserialize)]
struct Entry {
    re: f64,
    #[serde(default)]
    im: f64,
}

#[derive(Deserialize)]
struct StateFile {
    dim_a: usize,
    dim_b: usize,
    matrix: Vec<Vec<Entry>>,
}

pub fn state_from_json(text: &str, tol: &Tolerances) -> Result<BipartiteState> {
    let file: StateFile = serde_json::from_str(text)?;
    let n = file.dim_a * file.dim_b;
    if file.matrix.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: file.matrix.len() });
    }
    let rows: Vec<Vec<C64>> = file
        .matrix
        .iter()
        .map(|r| r.iter().map(|e| C64::new(e.re, e.im)).collect())
        .collect();
    let rho = ComplexMatrix::from_rows(&rows)?;
    BipartiteState::validate_with(rho, file.dim_a, file.dim_b, tol)
}

/// 17 significant digits, enough to round-trip any f64.
fn num(x: f64) -> String {
    if x == 0.0 {
        "0.0".to_string()
    } else {
        format!("{x:.16e}")
    }
}

pub fn state_to_json(state: &BipartiteState) -> String {
    let m = state.matrix();
    let mut out = String::new();
    let _ = write!(out, "{{\"dim_a\": {}, \"dim_b\": {}, \"matrix\": [", state.dim_a(), state.dim_b());
    for i in 0..m.rows() {
        if i > 0 {
            out.push_str(", ");
        }
        out.push_str("\n  [");
        for j in 0..m.cols() {
            if j > 0 {
                out.push_str(", ");
            }
            let z = m[(i, j)];
            let _ = write!(out, "{{\"re\": {}, \"im\": {}}}", num(z.re), num(z.im));
        }
        out.push(']');
    }
    out.push_str("\n]}\n");
    out
}

pub fn read_state_file(path: &Path, tol: &Tolerances) -> Result<BipartiteState> {
    let text = std::fs::read_to_string(path)?;
    state_from_json(&text, tol)
}

pub fn write_state_file(path: &Path, state: &BipartiteState) -> Result<()> {
    std::fs::write(path, state_to_json(state))?;
    Ok(())
}
