//! Per-span ISRS power evolution: the coupled Raman ODE system and the
//! power-conserving triangular-gain closed form.
//!
//! The ODE solved per channel i is
//!
//! ```text
//! dP_i/dz = P_i·( −α_i + Σ_{f_j>f_i} Cr(f_j−f_i)·P_j − Σ_{f_j<f_i} k_ij·Cr(f_i−f_j)·P_j )
//! ```
//!
//! with `k_ij = f_i/f_j` when the photon-flux correction is on (pump photons
//! convert one-to-one, not watt-for-watt) and 1 otherwise.

use serde::{Deserialize, Serialize};

use crate::constants::alpha_db_to_1_km;
use crate::error::{Error, Result};
use crate::ode::{self, StepControl};
use crate::spectrum::ChannelGrid;

/// A piecewise-linear table over frequency (THz), clamped at the ends.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FreqTable {
    points: Vec<(f64, f64)>,
}

impl FreqTable {
    pub fn constant(value: f64) -> Self {
        Self {
            points: vec![(0.0, value)],
        }
    }

    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidLink("empty frequency table".into()));
        }
        for w in points.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::InvalidLink(
                    "frequency table not strictly ascending".into(),
                ));
            }
        }
        Ok(Self { points })
    }

    pub fn at(&self, f_thz: f64) -> f64 {
        let pts = &self.points;
        if f_thz <= pts[0].0 {
            return pts[0].1;
        }
        if f_thz >= pts[pts.len() - 1].0 {
            return pts[pts.len() - 1].1;
        }
        let k = pts.partition_point(|p| p.0 <= f_thz);
        let (f0, v0) = pts[k - 1];
        let (f1, v1) = pts[k];
        v0 + (v1 - v0) * (f_thz - f0) / (f1 - f0)
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }
}

/// Raman gain coefficient Cr(Δf) for the lower-frequency channel of a pair,
/// in 1/(W·km) at pump-signal separation Δf ≥ 0 (THz).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum RamanGain {
    /// Cr(Δf) = slope·Δf up to the cutoff, zero beyond.
    Triangular { slope_1_w_km_thz: f64, cutoff_thz: f64 },
    /// Linear interpolation through the given (Δf, Cr) points, zero outside.
    Tabulated { points: Vec<(f64, f64)> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RamanGainSpec {
    pub gain: RamanGain,
    pub photon_flux_correction: bool,
}

impl RamanGainSpec {
    pub fn validate(&self) -> Result<()> {
        match &self.gain {
            RamanGain::Triangular { slope_1_w_km_thz, cutoff_thz } => {
                if *slope_1_w_km_thz < 0.0 || *cutoff_thz < 0.0 {
                    return Err(Error::InvalidLink(
                        "triangular Raman slope and cutoff must be non-negative".into(),
                    ));
                }
            }
            RamanGain::Tabulated { points } => {
                if points.is_empty() {
                    return Err(Error::InvalidLink("empty Raman gain table".into()));
                }
                for w in points.windows(2) {
                    if w[1].0 <= w[0].0 {
                        return Err(Error::InvalidLink(
                            "Raman gain table not strictly ascending in Δf".into(),
                        ));
                    }
                }
                if points[0].0 < 0.0 {
                    return Err(Error::InvalidLink("Raman gain table has Δf < 0".into()));
                }
                if points.iter().any(|p| p.1 < 0.0) {
                    return Err(Error::InvalidLink("Raman gain must be ≥ 0".into()));
                }
                // Cr(0) = 0: either the table starts above zero (zero outside)
                // or its first point is (0, 0).
                if points[0].0 == 0.0 && points[0].1 != 0.0 {
                    return Err(Error::InvalidLink("Raman gain table must have Cr(0) = 0".into()));
                }
            }
        }
        Ok(())
    }

    /// Cr(Δf), Δf in THz.
    pub fn cr(&self, df_thz: f64) -> f64 {
        if df_thz <= 0.0 {
            return 0.0;
        }
        match &self.gain {
            RamanGain::Triangular { slope_1_w_km_thz, cutoff_thz } => {
                if df_thz <= *cutoff_thz {
                    slope_1_w_km_thz * df_thz
                } else {
                    0.0
                }
            }
            RamanGain::Tabulated { points } => {
                if df_thz < points[0].0 || df_thz > points[points.len() - 1].0 {
                    return 0.0;
                }
                let k = points.partition_point(|p| p.0 <= df_thz);
                if k == 0 {
                    return points[0].1;
                }
                if k == points.len() {
                    return points[points.len() - 1].1;
                }
                let (f0, v0) = points[k - 1];
                let (f1, v1) = points[k];
                v0 + (v1 - v0) * (df_thz - f0) / (f1 - f0)
            }
        }
    }
}

/// One fiber span with frequency-dependent loss, dispersion and nonlinearity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiberSpan {
    pub length_km: f64,
    /// Attenuation in dB/km over frequency.
    pub alpha_db_km: FreqTable,
    /// Dispersion at the reference wavelength, ps/(nm·km).
    pub d_ref_ps_nm_km: f64,
    /// Dispersion slope, ps/(nm²·km).
    pub s_ref_ps_nm2_km: f64,
    pub lambda_ref_nm: f64,
    /// Nonlinearity coefficient in 1/(W·km) over frequency.
    pub gamma_1_w_km: FreqTable,
    pub raman: RamanGainSpec,
}

impl FiberSpan {
    pub fn validate(&self, grid: &ChannelGrid) -> Result<()> {
        if !(self.length_km > 0.0) {
            return Err(Error::InvalidLink("span length must be positive".into()));
        }
        for ch in grid.channels() {
            if !(self.alpha_db_km.at(ch.f_center_thz) > 0.0) {
                return Err(Error::InvalidLink(format!(
                    "attenuation must be positive at {:.4} THz",
                    ch.f_center_thz
                )));
            }
            if self.gamma_1_w_km.at(ch.f_center_thz) < 0.0 {
                return Err(Error::InvalidLink(format!(
                    "gamma must be non-negative at {:.4} THz",
                    ch.f_center_thz
                )));
            }
        }
        self.raman.validate()
    }

    /// Attenuation coefficient in 1/km at a frequency.
    pub fn alpha_1_km(&self, f_thz: f64) -> f64 {
        alpha_db_to_1_km(self.alpha_db_km.at(f_thz))
    }
}

/// Distance-resolved per-channel powers inside one span.
#[derive(Debug, Clone)]
pub struct PowerProfile {
    z_km: Vec<f64>,
    /// powers_w[k][i]: power of channel i at z_km[k], in W.
    powers_w: Vec<Vec<f64>>,
}

impl PowerProfile {
    fn new(z_km: Vec<f64>, powers_w: Vec<Vec<f64>>) -> Self {
        debug_assert_eq!(z_km.len(), powers_w.len());
        Self { z_km, powers_w }
    }

    pub fn z_km(&self) -> &[f64] {
        &self.z_km
    }

    pub fn n_channels(&self) -> usize {
        self.powers_w[0].len()
    }

    pub fn input_powers(&self) -> &[f64] {
        &self.powers_w[0]
    }

    pub fn output_powers(&self) -> &[f64] {
        &self.powers_w[self.powers_w.len() - 1]
    }

    pub fn power_at(&self, z_index: usize, channel: usize) -> f64 {
        self.powers_w[z_index][channel]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.powers_w
    }
}

/// Signed Raman coupling matrix: `m[i][j]·P_j` is channel i's fractional
/// gain rate due to channel j, in 1/(W·km).
fn coupling_matrix(span: &FiberSpan, grid: &ChannelGrid) -> Vec<f64> {
    let n = grid.len();
    let f: Vec<f64> = grid.frequencies_thz();
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            m[i * n + j] = if f[j] > f[i] {
                span.raman.cr(f[j] - f[i])
            } else {
                let k = if span.raman.photon_flux_correction {
                    f[i] / f[j]
                } else {
                    1.0
                };
                -k * span.raman.cr(f[i] - f[j])
            };
        }
    }
    m
}

/// Solves the coupled Raman ODE over one span.
pub fn propagate(
    span: &FiberSpan,
    input_powers_w: &[f64],
    grid: &ChannelGrid,
    ctrl: &StepControl,
) -> Result<PowerProfile> {
    let n = grid.len();
    if input_powers_w.len() != n {
        return Err(Error::InvalidLaunch(format!(
            "{} input powers for {} channels",
            input_powers_w.len(),
            n
        )));
    }
    if let Some(i) = input_powers_w.iter().position(|p| !(*p > 0.0)) {
        return Err(Error::NonPositivePower { channel: i, z_km: 0.0 });
    }

    let alpha: Vec<f64> = grid
        .channels()
        .iter()
        .map(|c| span.alpha_1_km(c.f_center_thz))
        .collect();
    let coupling = coupling_matrix(span, grid);

    let rhs = |_z: f64, y: &[f64], dy: &mut [f64]| {
        for i in 0..n {
            let row = &coupling[i * n..(i + 1) * n];
            let mut s = 0.0;
            for j in 0..n {
                s += row[j] * y[j];
            }
            dy[i] = y[i] * (s - alpha[i]);
        }
    };

    let sol = ode::integrate(rhs, 0.0, span.length_km, input_powers_w, ctrl)?;

    for (k, row) in sol.y.iter().enumerate() {
        if let Some(i) = row.iter().position(|p| !(*p > 0.0) || !p.is_finite()) {
            return Err(Error::NonPositivePower {
                channel: i,
                z_km: sol.t[k],
            });
        }
    }
    Ok(PowerProfile::new(sol.t, sol.y))
}

/// Pure-loss profile (Raman forced off) on a uniform grid; the exact
/// solution when inter-channel coupling is absent.
pub fn pure_loss_profile(
    span: &FiberSpan,
    input_powers_w: &[f64],
    grid: &ChannelGrid,
    max_step_km: f64,
) -> Result<PowerProfile> {
    let n = grid.len();
    if input_powers_w.len() != n {
        return Err(Error::InvalidLaunch(format!(
            "{} input powers for {} channels",
            input_powers_w.len(),
            n
        )));
    }
    if let Some(i) = input_powers_w.iter().position(|p| !(*p > 0.0)) {
        return Err(Error::NonPositivePower { channel: i, z_km: 0.0 });
    }
    let alpha: Vec<f64> = grid
        .channels()
        .iter()
        .map(|c| span.alpha_1_km(c.f_center_thz))
        .collect();
    // Step small enough that trapezoidal effective lengths carry ~1e-5
    // relative error or better.
    let step = max_step_km.min(0.25).max(1e-6);
    let n_steps = (span.length_km / step).ceil() as usize;
    let h = span.length_km / n_steps as f64;
    let mut z_km = Vec::with_capacity(n_steps + 1);
    let mut powers = Vec::with_capacity(n_steps + 1);
    for k in 0..=n_steps {
        let z = if k == n_steps { span.length_km } else { k as f64 * h };
        z_km.push(z);
        powers.push(
            (0..n)
                .map(|i| input_powers_w[i] * (-alpha[i] * z).exp())
                .collect(),
        );
    }
    Ok(PowerProfile::new(z_km, powers))
}

/// Closed-form power profile for a pure triangular Raman gain, flat loss
/// (evaluated at the comb center) and no photon-flux correction:
///
/// ```text
/// P_i(z) = P_i(0)·e^{−αz}·P_tot·e^{−P_tot·σ·L_eff(z)·f_i} / Σ_j P_j(0)·e^{−P_tot·σ·L_eff(z)·f_j}
/// ```
pub fn triangular_profile(
    span: &FiberSpan,
    input_powers_w: &[f64],
    grid: &ChannelGrid,
    z_km: f64,
) -> Result<Vec<f64>> {
    let RamanGain::Triangular { slope_1_w_km_thz, .. } = span.raman.gain else {
        return Err(Error::NonTriangularRaman);
    };
    if !(0.0..=span.length_km).contains(&z_km) {
        return Err(Error::InvalidLink(format!(
            "z = {} km outside the span [0, {}]",
            z_km, span.length_km
        )));
    }
    let f = grid.frequencies_thz();
    let f_ref = grid.comb_center_thz();
    let alpha = span.alpha_1_km(f_ref);
    let l_eff = if alpha > 0.0 {
        (1.0 - (-alpha * z_km).exp()) / alpha
    } else {
        z_km
    };
    let p_tot: f64 = input_powers_w.iter().sum();
    let a = p_tot * slope_1_w_km_thz * l_eff;
    // Shift frequencies by the comb center: the ratio is shift-invariant and
    // the exponents stay small.
    let weights: Vec<f64> = input_powers_w
        .iter()
        .zip(&f)
        .map(|(p, fi)| p * (-a * (fi - f_ref)).exp())
        .collect();
    let denom: f64 = weights.iter().sum();
    let decay = (-alpha * z_km).exp();
    Ok(weights.iter().map(|w| w * decay * p_tot / denom).collect())
}

/// Effective length of a channel over the profile, `∫ρ_i(z)dz` with
/// `ρ_i(z) = P_i(z)/P_i(0)`, by the trapezoidal rule on the profile grid.
/// Returned in km.
pub fn effective_length(profile: &PowerProfile, channel: usize) -> f64 {
    let p0 = profile.powers_w[0][channel];
    let mut acc = 0.0;
    for k in 1..profile.z_km.len() {
        let h = profile.z_km[k] - profile.z_km[k - 1];
        let a = profile.powers_w[k - 1][channel];
        let b = profile.powers_w[k][channel];
        acc += 0.5 * h * (a + b);
    }
    acc / p0
}

/// Net power ratio of a channel over the span, `P_i(L)/P_i(0)`.
pub fn net_gain(profile: &PowerProfile, channel: usize) -> f64 {
    profile.output_powers()[channel] / profile.input_powers()[channel]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::{build_grid, Band, BandPlan};

    fn grid_n(n: usize, f_start_thz: f64, spacing_thz: f64) -> ChannelGrid {
        // One wide band holding exactly n channels at the given spacing.
        let width = if n == 1 {
            spacing_thz
        } else {
            (n as f64 - 0.5) * spacing_thz
        };
        let plan = BandPlan::new(vec![Band {
            name: "X".into(),
            f_min_thz: f_start_thz,
            f_max_thz: f_start_thz + width,
        }])
        .unwrap();
        let grid = build_grid(&plan, spacing_thz * 1e3, 100.0, 0.1).unwrap();
        assert_eq!(grid.len(), n);
        grid
    }

    fn span_with(alpha_db_km: f64, gain: RamanGain, correction: bool) -> FiberSpan {
        FiberSpan {
            length_km: 100.0,
            alpha_db_km: FreqTable::constant(alpha_db_km),
            d_ref_ps_nm_km: 17.0,
            s_ref_ps_nm2_km: 0.0,
            lambda_ref_nm: 1550.0,
            gamma_1_w_km: FreqTable::constant(1.3),
            raman: RamanGainSpec {
                gain,
                photon_flux_correction: correction,
            },
        }
    }

    /// Analytic solution of the lossless two-channel power-conserving system
    /// with constant Cr: a logistic exchange.
    fn logistic_low(p_low0: f64, p_high0: f64, cr: f64, z: f64) -> f64 {
        let t = p_low0 + p_high0;
        t * p_low0 * (cr * t * z).exp() / (p_high0 + p_low0 * (cr * t * z).exp())
    }

    #[test]
    fn single_channel_is_pure_loss() {
        let grid = grid_n(1, 193.0, 0.2);
        let span = span_with(
            0.2,
            RamanGain::Triangular { slope_1_w_km_thz: 0.028, cutoff_thz: 14.0 },
            true,
        );
        let prof = propagate(&span, &[1e-3], &grid, &StepControl::default()).unwrap();
        let out = prof.output_powers()[0];
        assert!((out / 1e-5 - 1.0).abs() < 1e-7, "{out}");
    }

    #[test]
    fn two_channel_exchange_matches_logistic() {
        let grid = grid_n(2, 193.0, 0.5);
        // Effectively lossless; constant Cr via a flat-topped table.
        let span = FiberSpan {
            alpha_db_km: FreqTable::constant(1e-12),
            ..span_with(
                0.2,
                RamanGain::Tabulated { points: vec![(0.49, 1.0), (0.51, 1.0)] },
                false,
            )
        };
        let prof = propagate(&span, &[1e-3, 1e-3], &grid, &StepControl::default()).unwrap();
        let p_low = prof.output_powers()[0];
        let p_high = prof.output_powers()[1];
        let expect_low = logistic_low(1e-3, 1e-3, 1.0, 100.0);
        assert!((p_low / expect_low - 1.0).abs() < 1e-6, "{p_low} vs {expect_low}");
        assert!((p_high / (2e-3 - expect_low) - 1.0).abs() < 1e-6);
        // Spec's rounded figures.
        assert!((p_low * 1e3 - 1.0997).abs() < 1e-4);
        assert!((p_high * 1e3 - 0.9003).abs() < 1e-4);
        assert!((net_gain(&prof, 0) - 1.0997).abs() < 1e-4);
        assert!((net_gain(&prof, 1) - 0.9003).abs() < 1e-4);
    }

    #[test]
    fn comb_tilt_is_monotone() {
        let plan = BandPlan::new(vec![
            Band { name: "L".into(), f_min_thz: 184.50, f_max_thz: 190.35 },
            Band { name: "C".into(), f_min_thz: 190.75, f_max_thz: 196.60 },
            Band { name: "S".into(), f_min_thz: 197.00, f_max_thz: 202.85 },
        ])
        .unwrap();
        let grid = build_grid(&plan, 118.75, 100.0, 0.1).unwrap();
        // Cutoff beyond the comb span keeps Cr monotone over every pair.
        let span = span_with(
            0.2,
            RamanGain::Triangular { slope_1_w_km_thz: 0.028, cutoff_thz: 30.0 },
            true,
        );
        let launch = vec![1e-3; grid.len()];
        let prof = propagate(&span, &launch, &grid, &StepControl::default()).unwrap();
        let gains: Vec<f64> = (0..grid.len()).map(|i| net_gain(&prof, i)).collect();
        // Lowest-frequency channels gain relative to pure loss, highest lose.
        let pure = 10f64.powf(-2.0);
        assert!(gains[0] > pure);
        assert!(gains[grid.len() - 1] < pure);
        for w in gains.windows(2) {
            assert!(w[0] >= w[1] - 1e-12, "ISRS tilt must not reverse");
        }
    }

    #[test]
    fn conservation_without_loss() {
        let grid = grid_n(24, 190.0, 0.15);
        let launch: Vec<f64> = (0..24).map(|i| 1e-3 * (1.0 + 0.03 * i as f64)).collect();

        // Photon-number conservation with the correction on.
        let span = FiberSpan {
            alpha_db_km: FreqTable::constant(1e-15),
            ..span_with(
                0.2,
                RamanGain::Triangular { slope_1_w_km_thz: 0.028, cutoff_thz: 14.0 },
                true,
            )
        };
        let prof = propagate(&span, &launch, &grid, &StepControl::default()).unwrap();
        let photons = |row: &Vec<f64>| -> f64 {
            row.iter()
                .zip(grid.channels())
                .map(|(p, c)| p / c.f_center_thz)
                .sum()
        };
        let n0 = photons(&prof.rows()[0]);
        for row in prof.rows() {
            assert!((photons(row) / n0 - 1.0).abs() < 1e-7);
        }
    }

    #[test]
    fn power_conservation_without_correction() {
        let grid = grid_n(24, 190.0, 0.15);
        let launch: Vec<f64> = (0..24).map(|i| 1e-3 * (1.0 + 0.03 * i as f64)).collect();
        let span = FiberSpan {
            alpha_db_km: FreqTable::constant(1e-15),
            ..span_with(
                0.2,
                RamanGain::Triangular { slope_1_w_km_thz: 0.028, cutoff_thz: 14.0 },
                false,
            )
        };
        let prof = propagate(&span, &launch, &grid, &StepControl::default()).unwrap();
        let p0: f64 = prof.rows()[0].iter().sum();
        for row in prof.rows() {
            let p: f64 = row.iter().sum();
            assert!((p / p0 - 1.0).abs() < 1e-7);
        }
    }

    #[test]
    fn refinement_under_tolerance_halving() {
        let grid = grid_n(8, 190.0, 0.4);
        let span = span_with(
            0.21,
            RamanGain::Triangular { slope_1_w_km_thz: 0.028, cutoff_thz: 14.0 },
            true,
        );
        let launch: Vec<f64> = (0..8).map(|i| 2e-3 * (1.0 + 0.1 * i as f64)).collect();
        let coarse = StepControl { rel_tol: 1e-6, ..Default::default() };
        let fine = StepControl { rel_tol: 5e-7, ..Default::default() };
        let pc = propagate(&span, &launch, &grid, &coarse).unwrap();
        let pf = propagate(&span, &launch, &grid, &fine).unwrap();
        for i in 0..8 {
            let rel =
                (pc.output_powers()[i] / pf.output_powers()[i] - 1.0).abs();
            assert!(rel < 1e-6, "channel {i}: {rel}");
        }
    }

    #[test]
    fn triangular_closed_form_identities() {
        let grid = grid_n(6, 190.0, 0.5);
        let span = span_with(
            0.2,
            RamanGain::Triangular { slope_1_w_km_thz: 0.028, cutoff_thz: 50.0 },
            false,
        );
        let launch: Vec<f64> = (0..6).map(|i| 1e-3 * (1.0 + 0.2 * i as f64)).collect();

        // z = 0 returns the input exactly.
        let p0 = triangular_profile(&span, &launch, &grid, 0.0).unwrap();
        for (a, b) in p0.iter().zip(&launch) {
            assert!((a / b - 1.0).abs() < 1e-14);
        }

        // Zero slope reduces to exponential decay.
        let flat = FiberSpan {
            raman: RamanGainSpec {
                gain: RamanGain::Triangular { slope_1_w_km_thz: 0.0, cutoff_thz: 50.0 },
                photon_flux_correction: false,
            },
            ..span.clone()
        };
        let p = triangular_profile(&flat, &launch, &grid, 80.0).unwrap();
        let alpha = alpha_db_to_1_km(0.2);
        for (a, b) in p.iter().zip(&launch) {
            assert!((a / (b * (-alpha * 80.0).exp()) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn triangular_matches_ode_when_loss_is_flat() {
        let grid = grid_n(12, 189.0, 0.6);
        let span = span_with(
            0.2,
            RamanGain::Triangular { slope_1_w_km_thz: 0.028, cutoff_thz: 50.0 },
            false,
        );
        let launch: Vec<f64> = (0..12).map(|i| 2e-3 * (1.0 + 0.05 * i as f64)).collect();
        let prof = propagate(&span, &launch, &grid, &StepControl::default()).unwrap();
        let closed = triangular_profile(&span, &launch, &grid, span.length_km).unwrap();
        for i in 0..12 {
            let db = 10.0 * (prof.output_powers()[i] / closed[i]).log10().abs();
            assert!(db < 0.1, "channel {i}: {db} dB");
        }
    }

    #[test]
    fn triangular_requires_triangular_spec() {
        let grid = grid_n(2, 193.0, 0.5);
        let span = span_with(
            0.2,
            RamanGain::Tabulated { points: vec![(0.0, 0.0), (14.0, 0.39)] },
            false,
        );
        assert!(matches!(
            triangular_profile(&span, &[1e-3, 1e-3], &grid, 50.0),
            Err(Error::NonTriangularRaman)
        ));
    }

    #[test]
    fn effective_length_of_pure_loss() {
        let grid = grid_n(1, 193.0, 0.2);
        let span = span_with(
            0.2,
            RamanGain::Triangular { slope_1_w_km_thz: 0.028, cutoff_thz: 14.0 },
            true,
        );
        let prof = propagate(&span, &[1e-3], &grid, &StepControl::default()).unwrap();
        let alpha = alpha_db_to_1_km(0.2);
        let exact = (1.0 - (-alpha * 100.0).exp()) / alpha;
        let leff = effective_length(&prof, 0);
        assert!((leff / exact - 1.0).abs() < 1e-3, "{leff} vs {exact}");
    }

    #[test]
    fn effective_length_flat_profile_is_span_length() {
        let grid = grid_n(2, 193.0, 0.5);
        let span = FiberSpan {
            alpha_db_km: FreqTable::constant(1e-15),
            ..span_with(
                0.2,
                RamanGain::Triangular { slope_1_w_km_thz: 0.0, cutoff_thz: 14.0 },
                false,
            )
        };
        let prof = propagate(&span, &[1e-3, 1e-3], &grid, &StepControl::default()).unwrap();
        assert!((effective_length(&prof, 0) - 100.0).abs() < 1e-9);
        assert!((net_gain(&prof, 0) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn isrs_tilts_effective_lengths() {
        let grid = grid_n(10, 189.0, 1.0);
        let span = span_with(
            0.2,
            RamanGain::Triangular { slope_1_w_km_thz: 0.028, cutoff_thz: 14.0 },
            true,
        );
        let launch = vec![5e-3; 10];
        let prof = propagate(&span, &launch, &grid, &StepControl::default()).unwrap();
        let alpha = alpha_db_to_1_km(0.2);
        let loss_only = (1.0 - (-alpha * 100.0).exp()) / alpha;
        assert!(effective_length(&prof, 0) > loss_only);
        assert!(effective_length(&prof, 9) < loss_only);
    }

    #[test]
    fn non_positive_input_is_rejected() {
        let grid = grid_n(2, 193.0, 0.5);
        let span = span_with(
            0.2,
            RamanGain::Triangular { slope_1_w_km_thz: 0.028, cutoff_thz: 14.0 },
            true,
        );
        assert!(matches!(
            propagate(&span, &[1e-3, 0.0], &grid, &StepControl::default()),
            Err(Error::NonPositivePower { channel: 1, .. })
        ));
    }

    #[test]
    fn pure_loss_profile_matches_analytic() {
        let grid = grid_n(3, 193.0, 0.5);
        let span = span_with(
            0.19,
            RamanGain::Triangular { slope_1_w_km_thz: 0.028, cutoff_thz: 14.0 },
            true,
        );
        let launch = vec![1e-3, 2e-3, 3e-3];
        let prof = pure_loss_profile(&span, &launch, &grid, 1.0).unwrap();
        let alpha = alpha_db_to_1_km(0.19);
        for i in 0..3 {
            let expect = launch[i] * (-alpha * 100.0).exp();
            assert!((prof.output_powers()[i] / expect - 1.0).abs() < 1e-12);
        }
    }
}
