//! Nelder–Mead simplex minimization with per-coordinate convergence checks.

/// Options for one simplex run.
#[derive(Debug, Clone)]
pub struct NmOptions {
    pub max_evals: usize,
    /// Converged when every vertex is within this distance of the best, per
    /// coordinate...
    pub x_tol: f64,
    /// ...and the relative spread of objective values is below this.
    pub f_tol_rel: f64,
    /// Initial step along each coordinate when building the simplex.
    pub initial_step: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct NmOutcome {
    pub x: Vec<f64>,
    pub f: f64,
    pub evals: usize,
    pub iterations: usize,
    pub converged: bool,
}

const ALPHA: f64 = 1.0; // reflection
const GAMMA: f64 = 2.0; // expansion
const RHO: f64 = 0.5; // contraction
const SIGMA: f64 = 0.5; // shrink

/// Minimizes `f` starting from `x0`. The starting point is always a vertex,
/// so the outcome can never be worse than `f(x0)`.
pub fn minimize<F>(mut f: F, x0: &[f64], opts: &NmOptions) -> NmOutcome
where
    F: FnMut(&[f64]) -> f64,
{
    let dim = x0.len();
    assert!(dim >= 1);
    assert_eq!(opts.initial_step.len(), dim);

    let mut evals = 0;
    let mut eval = |x: &[f64], evals: &mut usize| -> f64 {
        *evals += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    let fx0 = eval(x0, &mut evals);
    simplex.push((x0.to_vec(), fx0));
    for i in 0..dim {
        let mut v = x0.to_vec();
        v[i] += opts.initial_step[i];
        let fv = eval(&v, &mut evals);
        simplex.push((v, fv));
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));

    let mut iterations = 0;
    let mut converged = false;

    while evals < opts.max_evals {
        iterations += 1;

        let spread_ok = {
            let best = &simplex[0];
            let x_ok = simplex.iter().skip(1).all(|(v, _)| {
                v.iter()
                    .zip(&best.0)
                    .all(|(a, b)| (a - b).abs() < opts.x_tol)
            });
            let worst_f = simplex[dim].1;
            let f_ok = (worst_f - best.1).abs()
                <= opts.f_tol_rel * (best.1.abs() + 1e-30);
            x_ok && f_ok
        };
        if spread_ok {
            converged = true;
            break;
        }

        // Centroid of all but the worst vertex.
        let mut centroid = vec![0.0; dim];
        for (v, _) in simplex.iter().take(dim) {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / dim as f64;
            }
        }
        let worst = simplex[dim].clone();
        let second_worst_f = simplex[dim - 1].1;
        let best_f = simplex[0].1;

        let point_at = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&worst.0)
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let reflected = point_at(ALPHA);
        let f_reflected = eval(&reflected, &mut evals);

        if f_reflected < best_f {
            let expanded = point_at(GAMMA);
            let f_expanded = eval(&expanded, &mut evals);
            if f_expanded < f_reflected {
                simplex[dim] = (expanded, f_expanded);
            } else {
                simplex[dim] = (reflected, f_reflected);
            }
        } else if f_reflected < second_worst_f {
            simplex[dim] = (reflected, f_reflected);
        } else {
            let contracted = if f_reflected < worst.1 {
                point_at(RHO) // outside
            } else {
                point_at(-RHO) // inside
            };
            let f_contracted = eval(&contracted, &mut evals);
            if f_contracted < worst.1.min(f_reflected) {
                simplex[dim] = (contracted, f_contracted);
            } else {
                // Shrink toward the best vertex.
                let best_x = simplex[0].0.clone();
                for k in 1..=dim {
                    let v: Vec<f64> = simplex[k]
                        .0
                        .iter()
                        .zip(&best_x)
                        .map(|(x, b)| b + SIGMA * (x - b))
                        .collect();
                    let fv = eval(&v, &mut evals);
                    simplex[k] = (v, fv);
                    if evals >= opts.max_evals {
                        break;
                    }
                }
            }
        }

        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    }

    let (x, f_best) = simplex.swap_remove(0);
    NmOutcome {
        x,
        f: f_best,
        evals,
        iterations,
        converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts(dim: usize) -> NmOptions {
        NmOptions {
            max_evals: 20_000,
            x_tol: 1e-8,
            f_tol_rel: 1e-12,
            initial_step: vec![0.5; dim],
        }
    }

    #[test]
    fn quadratic_bowl() {
        let f = |x: &[f64]| (x[0] - 1.0).powi(2) + 2.0 * (x[1] + 2.0).powi(2) + 3.0;
        let out = minimize(f, &[0.0, 0.0], &opts(2));
        assert!(out.converged);
        assert!((out.x[0] - 1.0).abs() < 1e-6);
        assert!((out.x[1] + 2.0).abs() < 1e-6);
        assert!((out.f - 3.0).abs() < 1e-10);
    }

    #[test]
    fn rosenbrock_2d() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let out = minimize(f, &[-1.2, 1.0], &opts(2));
        assert!(out.converged);
        assert!((out.x[0] - 1.0).abs() < 1e-4, "{:?}", out.x);
        assert!((out.x[1] - 1.0).abs() < 1e-4);
    }

    #[test]
    fn never_worse_than_start() {
        let f = |x: &[f64]| x.iter().map(|v| v.abs()).sum::<f64>();
        let start = [3.0, -4.0, 5.0];
        let out = minimize(f, &start, &opts(3));
        assert!(out.f <= f(&start));
    }

    #[test]
    fn eval_budget_exhaustion_reported() {
        let f = |x: &[f64]| x[0] * x[0];
        let out = minimize(
            f,
            &[10.0],
            &NmOptions {
                max_evals: 5,
                x_tol: 1e-12,
                f_tol_rel: 1e-15,
                initial_step: vec![0.5],
            },
        );
        assert!(!out.converged);
        assert!(out.evals <= 6);
    }
}
