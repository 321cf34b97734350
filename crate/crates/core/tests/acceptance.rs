//! One test per acceptance criterion. Each prints a single PASS/FAIL line
//! (written straight to stderr so it shows up without `--nocapture`).
//!
//! Tolerances are pinned here rather than read back from the library, so a
//! loosened default in `verify` cannot make a criterion pass.

use std::io::Write;
use std::time::{Duration, Instant};

use affinity_discord::verify::{run_criterion, CriterionReport, VerifyConfig};

fn report_line(r: &CriterionReport, problems: &[String]) -> String {
    let status = if problems.is_empty() { "PASS" } else { "FAIL" };
    let worst = r
        .gaps
        .iter()
        .map(|g| format!("{}={:.3e}/{:.0e}", g.label, g.measured, g.tolerance))
        .collect::<Vec<_>>()
        .join("; ");
    let mut line = format!("acceptance criterion {:>2} {:<30} {status}  [{worst}]", r.id, r.name);
    for p in problems {
        line.push_str(&format!("\n    {p}"));
    }
    line
}

/// Runs criterion `id` and checks every gap against `pinned` (label, tolerance).
fn check(id: u8, pinned: &[(&str, f64)], runtime_limit: Option<Duration>) {
    let started = Instant::now();
    let r = run_criterion(id, &VerifyConfig::default()).expect("known criterion");
    let elapsed = started.elapsed();

    let mut problems = Vec::new();
    if let Some(e) = &r.error {
        problems.push(format!("error: {e}"));
    }
    for &(label, tol) in pinned {
        match r.gaps.iter().find(|g| g.label == label) {
            None => problems.push(format!("missing gap `{label}`")),
            Some(g) => {
                if g.tolerance != tol {
                    problems.push(format!("`{label}` tolerance {} differs from pinned {tol}", g.tolerance));
                }
                if g.measured.is_nan() || g.measured > tol {
                    problems.push(format!("`{label}` measured {} exceeds {tol}", g.measured));
                }
            }
        }
    }
    if let Some(limit) = runtime_limit {
        if elapsed >= limit {
            problems.push(format!("runtime {elapsed:?} exceeds {limit:?}"));
        }
    }
    if !r.passed && problems.is_empty() {
        problems.push("report marked failed".into());
    }
    let _ = writeln!(std::io::stderr(), "\n{}", report_line(&r, &problems));
    assert!(problems.is_empty(), "criterion {id} failed: {problems:?}");
}

#[test]
fn criterion_01_werner_sweep() {
    check(
        1,
        &[
            ("analytic curves vs formulas", 1e-9),
            ("closed 2xn vs affinity formula", 1e-9),
            ("optimized affinity vs analytic", 1e-5),
            ("optimized hs vs analytic", 1e-5),
            ("analytic endpoints p=0, p=1", 1e-9),
            ("optimized endpoints p=0, p=1", 1e-5),
            ("affinity monotone on [0, 1]", 1e-12),
        ],
        Some(Duration::from_secs(30)),
    );
}

#[test]
fn criterion_02_pure_state_formula() {
    check(
        2,
        &[
            ("optimized vs 1 - sum s^2", 1e-5),
            ("closed 2xn vs 1 - sum s^2", 1e-10),
            ("maximally entangled closed vs (m-1)/m", 1e-6),
            ("maximally entangled optimized vs (m-1)/m", 1e-6),
        ],
        None,
    );
}

#[test]
fn criterion_03_closed_form_vs_optimizer() {
    check(3, &[("closed 2xn vs grid+refine", 1e-5)], None);
}

#[test]
fn criterion_04_lower_bound_dominance() {
    check(4, &[("bound - optimized", 1e-6), ("bound - closed 2xn", 1e-9)], None);
}

#[test]
fn criterion_05_ancilla_invariance() {
    check(
        5,
        &[
            ("affinity before vs after", 2e-5),
            ("hs after vs hs before * Tr sigma^2", 2e-5),
            ("closed 2xn before vs after", 1e-9),
        ],
        None,
    );
}

#[test]
fn criterion_06_zero_discord_classes() {
    check(6, &[("optimized discord", 1e-6), ("closed 2xn discord", 1e-6)], None);
}

#[test]
fn criterion_07_local_unitary_invariance() {
    check(7, &[("closed 2xn change", 1e-9), ("optimized change", 2e-5)], None);
}

#[test]
fn criterion_08_family_zeros_and_asymptotics() {
    check(
        8,
        &[
            ("werner x=1/m and isotropic x=1/m^2", 1e-12),
            ("werner m=64 vs (1 - sqrt(1 - x^2))/2", 0.05),
            ("isotropic m=64 vs x", 0.05),
        ],
        None,
    );
}

#[test]
fn criterion_09_qutrit_family_optimization() {
    check(
        9,
        &[("werner 3x3 multistart vs formula", 1e-4), ("isotropic 3x3 multistart vs formula", 1e-4)],
        Some(Duration::from_secs(300)),
    );
}

#[test]
fn criterion_10_numerical_substrate() {
    check(
        10,
        &[
            ("(sqrt rho)^2 residual", 1e-9),
            ("Parseval sum gamma^2 = 1", 1e-10),
            ("affinity symmetry", 1e-12),
        ],
        None,
    );
}
