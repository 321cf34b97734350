//! Derivative-free minimization (Nelder–Mead) with a hard evaluation budget.

#[derive(Debug, Clone)]
pub struct NelderMeadOptions {
    pub max_evals: usize,
    /// Initial simplex edge length along each axis.
    pub step: f64,
    /// Converged once the simplex spread drops below `ftol_rel * (|f_best| + 1e-12)`.
    pub ftol_rel: f64,
    /// Fresh simplexes built around the best point after convergence.
    pub restarts: usize,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        NelderMeadOptions { max_evals: 2000, step: 0.1, ftol_rel: 1e-10, restarts: 2 }
    }
}

#[derive(Debug, Clone)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub f: f64,
    pub evals: usize,
}

/// Minimizes `f` from `x0`. Deterministic: the same inputs give the same trace.
pub fn nelder_mead<F: FnMut(&[f64]) -> f64>(mut f: F, x0: &[f64], opts: &NelderMeadOptions) -> Minimum {
    let n = x0.len();
    let mut evals = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut best_x = x0.to_vec();
    if opts.max_evals == 0 {
        return Minimum { x: best_x, f: f64::INFINITY, evals };
    }
    let mut best_f = eval(x0, &mut evals);
    if n == 0 {
        return Minimum { x: best_x, f: best_f, evals };
    }

    let mut step = opts.step;
    for round in 0..=opts.restarts {
        if evals >= opts.max_evals {
            break;
        }
        let mut simplex: Vec<(Vec<f64>, f64)> = vec![(best_x.clone(), best_f)];
        for i in 0..n {
            if evals >= opts.max_evals {
                break;
            }
            let mut x = best_x.clone();
            x[i] += step;
            let fx = eval(&x, &mut evals);
            simplex.push((x, fx));
        }
        if simplex.len() < n + 1 {
            for (x, fx) in &simplex {
                if *fx < best_f {
                    best_f = *fx;
                    best_x = x.clone();
                }
            }
            break;
        }
        let start_f = best_f;

        while evals < opts.max_evals {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            let spread = simplex[n].1 - simplex[0].1;
            if spread <= opts.ftol_rel * (simplex[0].1.abs() + 1e-12) {
                break;
            }
            let mut centroid = vec![0.0; n];
            for (x, _) in &simplex[..n] {
                for (c, xi) in centroid.iter_mut().zip(x) {
                    *c += xi / n as f64;
                }
            }
            let along = |t: f64| -> Vec<f64> {
                centroid.iter().zip(&simplex[n].0).map(|(c, w)| c + t * (w - c)).collect()
            };

            let xr = along(-1.0);
            let fr = eval(&xr, &mut evals);
            if fr < simplex[0].1 {
                if evals >= opts.max_evals {
                    simplex[n] = (xr, fr);
                    break;
                }
                let xe = along(-2.0);
                let fe = eval(&xe, &mut evals);
                simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
            } else if fr < simplex[n - 1].1 {
                simplex[n] = (xr, fr);
            } else {
                if evals >= opts.max_evals {
                    break;
                }
                let (xc, fc) = if fr < simplex[n].1 {
                    let xc = along(-0.5);
                    let fc = eval(&xc, &mut evals);
                    (xc, fc)
                } else {
                    let xc = along(0.5);
                    let fc = eval(&xc, &mut evals);
                    (xc, fc)
                };
                if fc < simplex[n].1.min(fr) {
                    simplex[n] = (xc, fc);
                } else {
                    let x0 = simplex[0].0.clone();
                    for (x, fx) in simplex.iter_mut().skip(1) {
                        if evals >= opts.max_evals {
                            break;
                        }
                        for (xi, bi) in x.iter_mut().zip(&x0) {
                            *xi = bi + 0.5 * (*xi - bi);
                        }
                        *fx = eval(x, &mut evals);
                    }
                }
            }
        }
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        if simplex[0].1 < best_f {
            best_f = simplex[0].1;
            best_x = simplex[0].0.clone();
        }
        if best_f >= start_f && round > 0 {
            break;
        }
        step *= 0.1;
    }
    Minimum { x: best_x, f: best_f, evals }
}
