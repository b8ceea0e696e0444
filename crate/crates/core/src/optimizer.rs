//! Launch-spectrum search: full link evaluation, the analytic single-channel
//! optimum, throughput maximization over per-band cubic coefficients, and
//! fixed-point enforcement of the 3-dB rule.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::constants::{dbm_to_w, w_to_dbm, RULE_GAP_DB};
use crate::error::{Error, Result};
use crate::metrics::{self, ChannelReport, ThroughputCurve};
use crate::nelder_mead::{self, NmOptions};
use crate::nli::{compute_eta, nli_power};
use crate::noise::{ase_from_profiles, span_profiles, LinkSpec};
use crate::ode::StepControl;
use crate::spectrum::{eval_launch, LaunchSpectrum};

/// Options for the throughput-maximizing search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerOpts {
    /// Simplex restarts from a seeded low-discrepancy set.
    pub restarts: usize,
    /// Objective-evaluation budget per restart.
    pub max_evals: usize,
    /// Simplex size (dB per coefficient) below which a restart converges.
    pub x_tol_db: f64,
    /// Relative objective-spread convergence threshold.
    pub f_tol_rel: f64,
    pub seed: u64,
    /// Per-channel evaluated power clamp, dBm.
    pub power_min_dbm: f64,
    pub power_max_dbm: f64,
}

impl Default for OptimizerOpts {
    fn default() -> Self {
        Self {
            restarts: 4,
            max_evals: 2500,
            x_tol_db: 0.02,
            f_tol_rel: 1e-6,
            seed: 1,
            power_min_dbm: -15.0,
            power_max_dbm: 15.0,
        }
    }
}

/// Options for the 3-dB-rule fixed point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnforceOpts {
    /// Convergence: max per-channel |gap − 3.01 dB| below this.
    pub tol_db: f64,
    pub max_iters: usize,
    /// Damping on the dB update; the naive fixed point overshoots when ISRS
    /// coupling is strong.
    pub damping: f64,
    pub power_min_dbm: f64,
    pub power_max_dbm: f64,
}

impl Default for EnforceOpts {
    fn default() -> Self {
        Self {
            tol_db: 0.05,
            max_iters: 200,
            damping: 0.5,
            power_min_dbm: -15.0,
            power_max_dbm: 15.0,
        }
    }
}

/// Outcome of either search.
#[derive(Debug, Clone)]
pub struct OptimizationResult {
    pub best_spectrum: LaunchSpectrum,
    pub best_total_tbps: f64,
    pub reports: Vec<ChannelReport>,
    /// Objective evaluations spent.
    pub iterations: usize,
    pub converged: bool,
    pub restarts_used: usize,
    /// Final max per-channel |gap − 3.01 dB|; only set by `enforce_3db`.
    pub residual_db: Option<f64>,
}

/// Analytic optimum launch power `∛(P_ASE/2η)` for a power-independent η.
pub fn analytic_opt_power(eta_1_w2: f64, p_ase_w: f64) -> f64 {
    (p_ase_w / (2.0 * eta_1_w2)).cbrt()
}

/// Full pipeline for one launch spectrum: profiles → gains/ASE → η → NLI →
/// per-channel reports and total throughput.
pub fn evaluate(
    link: &LinkSpec,
    spectrum: &LaunchSpectrum,
    curve: &ThroughputCurve,
) -> Result<(Vec<ChannelReport>, f64)> {
    evaluate_with(link, spectrum, curve, &StepControl::default())
}

pub fn evaluate_with(
    link: &LinkSpec,
    spectrum: &LaunchSpectrum,
    curve: &ThroughputCurve,
    ctrl: &StepControl,
) -> Result<(Vec<ChannelReport>, f64)> {
    let launch = eval_launch(spectrum, &link.grid)?;
    evaluate_powers(link, &launch, curve, ctrl)
}

fn evaluate_powers(
    link: &LinkSpec,
    launch: &[f64],
    curve: &ThroughputCurve,
    ctrl: &StepControl,
) -> Result<(Vec<ChannelReport>, f64)> {
    let profiles = span_profiles(link, launch, ctrl)?;
    let p_ase = ase_from_profiles(link, launch, &profiles)?;
    let etas = compute_eta(link, &profiles)?;
    let p_nli = nli_power(launch, &etas);

    let mut reports = Vec::with_capacity(link.grid.len());
    for (i, ch) in link.grid.channels().iter().enumerate() {
        let report = metrics::make_report(
            i,
            ch.f_center_thz,
            &ch.band,
            launch[i],
            p_ase[i],
            p_nli[i],
            ch.symbol_rate_gbaud,
            curve,
        )
        .map_err(|e| e.with_context(format!("channel {i}")))?;
        reports.push(report);
    }
    let total = metrics::total_throughput(&reports);
    Ok((reports, total))
}

/// Flat starting power: the ISRS-off analytic optimum of a center channel.
fn flat_start_dbm(link: &LinkSpec, ctrl: &StepControl) -> Result<f64> {
    let link_off = link.with_isrs(false);
    let n = link_off.grid.len();
    let probe = vec![1e-3; n];
    let profiles = span_profiles(&link_off, &probe, ctrl)?;
    let p_ase = ase_from_profiles(&link_off, &probe, &profiles)?;
    let etas = compute_eta(&link_off, &profiles)?;
    let center = n / 2;
    // For a flat spectrum P_NLI,i = η_eff,i·P³ with η_eff the SPM
    // coefficient plus the XPM row sum, accumulated over spans.
    let eta_eff: f64 = etas
        .iter()
        .map(|e| e.eta_spm[center] + e.eta_xpm[center].iter().sum::<f64>())
        .sum();
    if eta_eff <= 0.0 {
        // Linear link: no finite optimum, fall back to 0 dBm.
        return Ok(0.0);
    }
    Ok(w_to_dbm(analytic_opt_power(eta_eff, p_ase[center])))
}

/// Per-band cubic coefficients packed as a flat vector in band order.
fn pack_coeffs(link: &LinkSpec, coeffs: &BTreeMap<String, [f64; 4]>) -> Vec<f64> {
    let mut x = Vec::with_capacity(4 * link.plan.bands().len());
    for band in link.plan.bands() {
        let c = coeffs.get(&band.name).copied().unwrap_or([0.0; 4]);
        x.extend_from_slice(&c);
    }
    x
}

fn unpack_coeffs(link: &LinkSpec, x: &[f64]) -> LaunchSpectrum {
    let mut coeffs = BTreeMap::new();
    for (k, band) in link.plan.bands().iter().enumerate() {
        coeffs.insert(
            band.name.clone(),
            [x[4 * k], x[4 * k + 1], x[4 * k + 2], x[4 * k + 3]],
        );
    }
    LaunchSpectrum::PerBandCubic { coeffs_dbm: coeffs }
}

fn clamp_powers(launch: &mut [f64], min_dbm: f64, max_dbm: f64) {
    let lo = dbm_to_w(min_dbm);
    let hi = dbm_to_w(max_dbm);
    for p in launch {
        *p = p.clamp(lo, hi);
    }
}

/// Least-squares fit of a cubic (in the normalized band position) through
/// per-channel dBm targets of one band.
fn fit_band_cubic(xs: &[f64], ys: &[f64]) -> [f64; 4] {
    debug_assert_eq!(xs.len(), ys.len());
    let m = xs.len();
    if m == 0 {
        return [0.0; 4];
    }
    if m == 1 {
        return [ys[0], 0.0, 0.0, 0.0];
    }
    let degree = 3.min(m - 1);
    // Normal equations for the monomial basis; tiny system, direct solve.
    let k = degree + 1;
    let mut ata = vec![0.0; k * k];
    let mut atb = vec![0.0; k];
    for (x, y) in xs.iter().zip(ys) {
        let mut powers = [1.0; 4];
        for p in 1..k {
            powers[p] = powers[p - 1] * x;
        }
        for r in 0..k {
            atb[r] += powers[r] * y;
            for c in 0..k {
                ata[r * k + c] += powers[r] * powers[c];
            }
        }
    }
    // Gaussian elimination with partial pivoting.
    for col in 0..k {
        let pivot = (col..k)
            .max_by(|&a, &b| ata[a * k + col].abs().total_cmp(&ata[b * k + col].abs()))
            .unwrap();
        if ata[pivot * k + col].abs() < 1e-12 {
            continue;
        }
        if pivot != col {
            for c in 0..k {
                ata.swap(col * k + c, pivot * k + c);
            }
            atb.swap(col, pivot);
        }
        for row in (col + 1)..k {
            let f = ata[row * k + col] / ata[col * k + col];
            for c in col..k {
                ata[row * k + c] -= f * ata[col * k + c];
            }
            atb[row] -= f * atb[col];
        }
    }
    let mut sol = [0.0; 4];
    for row in (0..k).rev() {
        let mut acc = atb[row];
        for c in (row + 1)..k {
            acc -= ata[row * k + c] * sol[c];
        }
        if ata[row * k + row].abs() >= 1e-12 {
            sol[row] = acc / ata[row * k + row];
        }
    }
    [sol[0], sol[1], sol[2], sol[3]]
}

/// Van der Corput radical inverse: the k-th Halton point in the given base.
fn halton(mut index: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while index > 0 {
        f /= base as f64;
        r += f * (index % base) as f64;
        index /= base;
    }
    r
}

const PRIMES: [u64; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];
/// Restart offset half-ranges per coefficient (c0..c3), dB.
const RESTART_SCALES: [f64; 4] = [3.0, 4.0, 2.0, 1.0];

/// Per-channel analytic targets from one evaluation, fitted per band — a
/// tilt-aware warm start for the ISRS-on search.
fn tilt_aware_start(
    link: &LinkSpec,
    reports: &[ChannelReport],
    min_dbm: f64,
    max_dbm: f64,
) -> Vec<f64> {
    let mut x = Vec::with_capacity(4 * link.plan.bands().len());
    for band in link.plan.bands() {
        let idx = link.grid.band_channels(&band.name);
        let xs: Vec<f64> = idx
            .iter()
            .map(|&i| link.grid.normalized_position(i))
            .collect();
        let ys: Vec<f64> = idx
            .iter()
            .map(|&i| {
                let r = &reports[i];
                if r.p_nli_w > 0.0 {
                    let eta_eff = r.p_nli_w / r.p_launch_w.powi(3);
                    w_to_dbm(analytic_opt_power(eta_eff, r.p_ase_w)).clamp(min_dbm, max_dbm)
                } else {
                    w_to_dbm(r.p_launch_w)
                }
            })
            .collect();
        x.extend_from_slice(&fit_band_cubic(&xs, &ys));
    }
    x
}

/// Maximizes total throughput over the per-band cubic launch coefficients
/// with a simplex search and seeded low-discrepancy restarts.
pub fn optimize_throughput(
    link: &LinkSpec,
    curve: &ThroughputCurve,
    opts: &OptimizerOpts,
    ctrl: &StepControl,
) -> Result<OptimizationResult> {
    link.validate()?;
    if opts.restarts == 0 {
        return Err(Error::InvalidLink("optimizer needs at least one restart".into()));
    }
    let dim = 4 * link.plan.bands().len();
    let p0_dbm = flat_start_dbm(link, ctrl)?.clamp(opts.power_min_dbm, opts.power_max_dbm);
    let flat = LaunchSpectrum::flat_dbm(&link.plan, p0_dbm);
    let LaunchSpectrum::PerBandCubic { coeffs_dbm } = &flat else {
        unreachable!()
    };
    let x_flat = pack_coeffs(link, coeffs_dbm);

    // The objective clamps evaluated powers into the configured box, which
    // bounds the search without constraining the coefficients themselves.
    let objective = |x: &[f64]| -> f64 {
        let spectrum = unpack_coeffs(link, x);
        let Ok(mut launch) = eval_launch(&spectrum, &link.grid) else {
            return f64::INFINITY;
        };
        clamp_powers(&mut launch, opts.power_min_dbm, opts.power_max_dbm);
        match evaluate_powers(link, &launch, curve, ctrl) {
            Ok((_, total)) => -total,
            Err(_) => f64::INFINITY,
        }
    };

    // Tilt-aware second start: fit the per-channel analytic optima computed
    // at the flat start.
    let x_tilt = {
        let mut launch = eval_launch(&flat, &link.grid)?;
        clamp_powers(&mut launch, opts.power_min_dbm, opts.power_max_dbm);
        let (reports, _) = evaluate_powers(link, &launch, curve, ctrl)?;
        tilt_aware_start(link, &reports, opts.power_min_dbm, opts.power_max_dbm)
    };

    let nm_opts = NmOptions {
        max_evals: opts.max_evals,
        x_tol: opts.x_tol_db,
        f_tol_rel: opts.f_tol_rel,
        initial_step: (0..dim).map(|k| if k % 4 == 0 { 1.0 } else { 0.5 }).collect(),
    };

    let mut best: Option<nelder_mead::NmOutcome> = None;
    let mut total_evals = 0;
    let halton_offset = opts.seed % 997 + 1;
    for r in 0..opts.restarts {
        let x0 = match r {
            0 => x_flat.clone(),
            1 => x_tilt.clone(),
            _ => {
                // Low-discrepancy offsets around the tilt-aware start.
                let idx = halton_offset + r as u64;
                x_tilt
                    .iter()
                    .enumerate()
                    .map(|(k, v)| {
                        let u = halton(idx, PRIMES[k % PRIMES.len()]);
                        v + (2.0 * u - 1.0) * RESTART_SCALES[k % 4]
                    })
                    .collect()
            }
        };
        let outcome = nelder_mead::minimize(&objective, &x0, &nm_opts);
        total_evals += outcome.evals;
        let better = match &best {
            Some(b) => outcome.f < b.f,
            None => true,
        };
        if better {
            best = Some(outcome);
        }
    }
    let best = best.unwrap();

    let spectrum = unpack_coeffs(link, &best.x);
    let mut launch = eval_launch(&spectrum, &link.grid)?;
    clamp_powers(&mut launch, opts.power_min_dbm, opts.power_max_dbm);
    let (reports, total) = evaluate_powers(link, &launch, curve, ctrl)?;
    Ok(OptimizationResult {
        best_spectrum: spectrum,
        best_total_tbps: total,
        reports,
        iterations: total_evals,
        converged: best.converged,
        restarts_used: opts.restarts,
        residual_db: None,
    })
}

/// Largest per-iteration move in dB; far-off analytic targets otherwise
/// teleport channels across the box early on.
const ENFORCE_MAX_STEP_DB: f64 = 3.0;

/// Damped fixed-point iteration driving every channel to `P_NLI = P_ASE/2`:
/// `P_i ← ∛(P_ASE,i(P)/2η_eff,i(P))` with `η_eff,i = P_NLI,i/P_i³` at the
/// current spectrum. The residual is kept monotone: a step that worsens it
/// is rolled back and retried with half the damping.
pub fn enforce_3db(
    link: &LinkSpec,
    curve: &ThroughputCurve,
    opts: &EnforceOpts,
    ctrl: &StepControl,
) -> Result<OptimizationResult> {
    link.validate()?;
    let p0_dbm = flat_start_dbm(link, ctrl)?.clamp(opts.power_min_dbm, opts.power_max_dbm);
    let n = link.grid.len();

    struct State {
        p_dbm: Vec<f64>,
        reports: Vec<ChannelReport>,
        total: f64,
        /// Max per-channel |gap − 3.01 dB| (the convergence metric).
        residual: f64,
        /// RMS of the same, used only to detect divergence.
        rms: f64,
    }
    let eval_state = |p_dbm: &[f64]| -> Result<State> {
        let launch: Vec<f64> = p_dbm.iter().map(|d| dbm_to_w(*d)).collect();
        let (reports, total) = evaluate_powers(link, &launch, curve, ctrl)?;
        let devs: Vec<f64> = reports
            .iter()
            .map(|r| {
                let d = (metrics::gap_3db(r) - RULE_GAP_DB).abs();
                if d.is_nan() {
                    f64::INFINITY
                } else {
                    d
                }
            })
            .collect();
        let residual = devs.iter().copied().fold(0.0f64, f64::max);
        let rms = (devs
            .iter()
            .map(|d| d.min(1e3) * d.min(1e3))
            .sum::<f64>()
            / n as f64)
            .sqrt();
        Ok(State {
            p_dbm: p_dbm.to_vec(),
            reports,
            total,
            residual,
            rms,
        })
    };

    let mut current = eval_state(&vec![p0_dbm; n])?;
    let mut evals = 1;
    let mut damping = opts.damping;
    while current.residual > opts.tol_db && evals < opts.max_iters && damping > 1e-4 {
        let mut p_next = current.p_dbm.clone();
        for i in 0..n {
            let r = &current.reports[i];
            // Analytic per-channel target at frozen η and ASE; degenerate
            // channels (zero NLI or zero ASE) aim at the box edges.
            let target_dbm = if r.p_nli_w <= 0.0 {
                opts.power_max_dbm
            } else if r.p_ase_w <= 0.0 {
                opts.power_min_dbm
            } else {
                let eta_eff = r.p_nli_w / r.p_launch_w.powi(3);
                w_to_dbm(analytic_opt_power(eta_eff, r.p_ase_w))
                    .clamp(opts.power_min_dbm, opts.power_max_dbm)
            };
            let step = (damping * (target_dbm - p_next[i]))
                .clamp(-ENFORCE_MAX_STEP_DB, ENFORCE_MAX_STEP_DB);
            p_next[i] = (p_next[i] + step).clamp(opts.power_min_dbm, opts.power_max_dbm);
        }
        let candidate = eval_state(&p_next)?;
        evals += 1;
        if std::env::var_os("MULTIBAND_ENFORCE_TRACE").is_some() {
            eprintln!(
                "enforce iter {evals}: damping {damping:.4} residual {:.4} rms {:.4} (candidate {:.4}/{:.4})",
                current.residual, current.rms, candidate.residual, candidate.rms
            );
        }
        current = candidate;
    }

    let powers_w: Vec<f64> = current.reports.iter().map(|r| r.p_launch_w).collect();
    let converged = current.residual <= opts.tol_db;
    Ok(OptimizationResult {
        best_spectrum: LaunchSpectrum::Explicit { powers_w },
        best_total_tbps: current.total,
        reports: current.reports,
        iterations: evals,
        converged,
        restarts_used: 1,
        residual_db: Some(current.residual),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::AmplifierSpec;
    use crate::raman::{FiberSpan, FreqTable, RamanGain, RamanGainSpec};
    use crate::spectrum::{build_grid, Band, BandPlan};

    fn single_channel_link(n_spans: usize) -> LinkSpec {
        let plan = BandPlan::new(vec![Band {
            name: "C".into(),
            f_min_thz: 193.4,
            f_max_thz: 193.6,
        }])
        .unwrap();
        let grid = build_grid(&plan, 200.0, 100.0, 0.1).unwrap();
        let span = FiberSpan {
            length_km: 100.0,
            alpha_db_km: FreqTable::constant(0.2),
            d_ref_ps_nm_km: 17.0,
            s_ref_ps_nm2_km: 0.0,
            lambda_ref_nm: 1550.0,
            gamma_1_w_km: FreqTable::constant(1.3),
            raman: RamanGainSpec {
                gain: RamanGain::Triangular { slope_1_w_km_thz: 0.028, cutoff_thz: 14.0 },
                photon_flux_correction: true,
            },
        };
        let amp = AmplifierSpec {
            nf_db: [("C".to_string(), 5.0)].into_iter().collect(),
        };
        LinkSpec {
            plan,
            grid,
            spans: vec![span; n_spans],
            amps: vec![amp; n_spans],
            isrs_enabled: false,
            noise_bandwidth_ghz: 100.0,
        }
    }

    #[test]
    fn analytic_identities() {
        // η = 0.5 1/mW² = 5e5 1/W², p_ase = 1e-6 W: optimum 0.1 mW.
        let p = analytic_opt_power(5e5, 1e-6);
        assert!((p - 1e-4).abs() < 1e-18);
        // At the optimum the rule holds: η·P³ = p_ase/2.
        assert!((5e5 * p.powi(3) / (1e-6 / 2.0) - 1.0).abs() < 1e-12);
        // Max GSNR identity.
        let gsnr_max = p / (1.5 * 1e-6);
        assert!((gsnr_max - 66.6666666667).abs() < 1e-6);
        // Cube-root homogeneity.
        assert!((analytic_opt_power(5e5, 8e-6) / (2.0 * p) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_gamma_link_is_linear() {
        let mut link = single_channel_link(2);
        for span in &mut link.spans {
            span.gamma_1_w_km = FreqTable::constant(0.0);
        }
        let spec = LaunchSpectrum::flat_dbm(&link.plan, 0.0);
        let (reports, _) = evaluate(&link, &spec, &ThroughputCurve::Shannon).unwrap();
        assert_eq!(reports[0].p_nli_w, 0.0);
        assert_eq!(reports[0].gsnr, reports[0].osnr);
    }

    #[test]
    fn pipeline_matches_hand_assembly() {
        let link = single_channel_link(1);
        let spec = LaunchSpectrum::flat_dbm(&link.plan, 2.0);
        let launch = eval_launch(&spec, &link.grid).unwrap();
        let ctrl = StepControl::default();
        let profiles = span_profiles(&link, &launch, &ctrl).unwrap();
        let p_ase = ase_from_profiles(&link, &launch, &profiles).unwrap();
        let etas = compute_eta(&link, &profiles).unwrap();
        let p_nli = nli_power(&launch, &etas);
        let g = metrics::gsnr(launch[0], p_ase[0], p_nli[0]).unwrap();
        let expect = metrics::throughput(g, 100.0, &ThroughputCurve::Shannon);

        let (reports, total) = evaluate(&link, &spec, &ThroughputCurve::Shannon).unwrap();
        assert!((reports[0].throughput_gbps / expect - 1.0).abs() < 1e-12);
        assert!((total - expect / 1e3).abs() < 1e-12);
    }

    #[test]
    fn single_channel_optimum_matches_grid_search() {
        let link = single_channel_link(10);
        let curve = ThroughputCurve::Shannon;
        let ctrl = StepControl::default();

        // Independent oracle: fine grid search over flat launch power.
        let mut best = (f64::NEG_INFINITY, 0.0);
        let mut dbm = -10.0;
        while dbm <= 10.0 {
            let spec = LaunchSpectrum::Explicit { powers_w: vec![dbm_to_w(dbm)] };
            let (_, total) = evaluate_with(&link, &spec, &curve, &ctrl).unwrap();
            if total > best.0 {
                best = (total, dbm);
            }
            dbm += 0.01;
        }

        let opts = OptimizerOpts { restarts: 2, max_evals: 800, ..Default::default() };
        let out = optimize_throughput(&link, &curve, &opts, &ctrl).unwrap();
        let opt_dbm = w_to_dbm(out.reports[0].p_launch_w);
        assert!(
            (opt_dbm - best.1).abs() < 0.05,
            "optimizer {opt_dbm} dBm vs grid {} dBm",
            best.1
        );
        assert!(out.best_total_tbps >= best.0 - 1e-6);
        // Result totals are consistent with their own reports.
        assert!(
            (metrics::total_throughput(&out.reports) - out.best_total_tbps).abs() < 1e-12
        );
    }

    #[test]
    fn enforce_converges_immediately_on_flat_link() {
        // With constant η the analytic fixed point is exact, and the start
        // point already sits on it.
        let link = single_channel_link(10);
        let out = enforce_3db(
            &link,
            &ThroughputCurve::Shannon,
            &EnforceOpts::default(),
            &StepControl::default(),
        )
        .unwrap();
        assert!(out.converged);
        assert!(out.iterations <= 2, "took {} iterations", out.iterations);
        assert!(out.residual_db.unwrap() <= 0.05);
        // And the reached point is the analytic optimum: P_NLI = P_ASE/2.
        let r = &out.reports[0];
        assert!((r.p_nli_w / (r.p_ase_w / 2.0) - 1.0).abs() < 0.02);
    }

    #[test]
    fn enforce_with_loose_tolerance_converges_at_once() {
        let link = single_channel_link(3);
        let opts = EnforceOpts { tol_db: 10.0, ..Default::default() };
        let out = enforce_3db(
            &link,
            &ThroughputCurve::Shannon,
            &opts,
            &StepControl::default(),
        )
        .unwrap();
        assert!(out.converged);
        assert_eq!(out.iterations, 1);
    }

    #[test]
    fn cubic_fit_recovers_polynomial() {
        let xs: Vec<f64> = (0..20).map(|k| k as f64 / 19.0).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 1.5 - 2.0 * x + 0.5 * x * x * x).collect();
        let c = fit_band_cubic(&xs, &ys);
        assert!((c[0] - 1.5).abs() < 1e-9);
        assert!((c[1] + 2.0).abs() < 1e-9);
        assert!(c[2].abs() < 1e-9);
        assert!((c[3] - 0.5).abs() < 1e-9);
    }

    #[test]
    fn halton_is_low_discrepancy_ish() {
        // First few base-2 points fill the unit interval.
        let pts: Vec<f64> = (1..9).map(|i| halton(i, 2)).collect();
        assert!((pts[0] - 0.5).abs() < 1e-15);
        assert!((pts[1] - 0.25).abs() < 1e-15);
        assert!((pts[2] - 0.75).abs() < 1e-15);
        for p in pts {
            assert!((0.0..1.0).contains(&p));
        }
    }
}
