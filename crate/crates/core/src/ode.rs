//! Adaptive explicit Runge–Kutta integration (Dormand–Prince 5(4)).
//!
//! The solver keeps every accepted step, which is what the Raman power
//! profiles need: downstream integrals (effective lengths, GN link kernels)
//! run on the accepted grid.

use crate::error::{Error, Result};

/// Step-size control for the adaptive integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    /// Per-step relative tolerance.
    pub rel_tol: f64,
    /// Tiny absolute floor so the error norm stays defined near zero.
    pub abs_tol: f64,
    /// Upper bound on the step size, in the independent variable's unit.
    pub max_step: f64,
}

impl Default for StepControl {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_tol: 1e-30,
            max_step: 1.0,
        }
    }
}

/// Dense record of accepted steps, both endpoints included.
#[derive(Debug, Clone)]
pub struct OdeSolution {
    pub t: Vec<f64>,
    pub y: Vec<Vec<f64>>,
}

// Dormand–Prince 5(4) tableau.
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
// Difference between the 5th- and embedded 4th-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Integrates `dy/dt = rhs(t, y)` from `t0` to `t1` (t1 > t0), recording
/// every accepted step. Fails with [`Error::StepSizeUnderflow`] if error
/// control drives the step below a sliver of the interval.
pub fn integrate<F>(rhs: F, t0: f64, t1: f64, y0: &[f64], ctrl: &StepControl) -> Result<OdeSolution>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    assert!(t1 > t0, "integration interval must be forward");
    assert!(ctrl.rel_tol > 0.0 && ctrl.max_step > 0.0);

    let n = y0.len();
    let span = t1 - t0;
    let h_min = span * 1e-12;

    let mut t = t0;
    let mut y = y0.to_vec();
    let mut h = ctrl.max_step.min(span / 100.0).max(h_min);

    let mut k = vec![vec![0.0; n]; 7];
    let mut y_stage = vec![0.0; n];
    let mut y_next = vec![0.0; n];

    let mut sol = OdeSolution {
        t: vec![t0],
        y: vec![y.clone()],
    };

    rhs(t, &y, &mut k[0]);
    let mut first_same_as_last = true;

    while t < t1 {
        h = h.min(t1 - t).min(ctrl.max_step);
        if h < h_min {
            return Err(Error::StepSizeUnderflow { z_km: t });
        }
        if !first_same_as_last {
            rhs(t, &y, &mut k[0]);
            first_same_as_last = true;
        }

        for stage in 0..6 {
            for i in 0..n {
                let mut acc = 0.0;
                for (j, kj) in k.iter().enumerate().take(stage + 1) {
                    acc += A[stage][j] * kj[i];
                }
                y_stage[i] = y[i] + h * acc;
            }
            let (head, tail) = k.split_at_mut(stage + 1);
            let _ = head;
            rhs(t + C[stage] * h, &y_stage, &mut tail[0]);
        }
        // Stage 6 already produced the 5th-order solution estimate.
        y_next.copy_from_slice(&y_stage);

        let mut err_norm: f64 = 0.0;
        for i in 0..n {
            let mut e = 0.0;
            for (j, kj) in k.iter().enumerate() {
                e += E[j] * kj[i];
            }
            e *= h;
            let scale = ctrl.abs_tol + ctrl.rel_tol * y[i].abs().max(y_next[i].abs());
            err_norm = err_norm.max((e / scale).abs());
        }

        if err_norm <= 1.0 {
            t += h;
            y.copy_from_slice(&y_next);
            sol.t.push(t);
            sol.y.push(y.clone());
            // FSAL: the last stage evaluation is the next step's first.
            k.swap(0, 6);
        } else {
            first_same_as_last = false;
        }

        let factor = if err_norm > 0.0 {
            (0.9 * err_norm.powf(-0.2)).clamp(0.2, 5.0)
        } else {
            5.0
        };
        h *= factor;
    }

    Ok(sol)
}
