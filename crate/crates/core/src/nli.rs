//! Closed-form per-channel NLI coefficients with ISRS-aware effective
//! lengths, and the resulting NLI powers.
//!
//! The per-span coefficients follow the incoherent GN closed form: an asinh
//! term for self-channel interference and a logarithmic term per interferer
//! for cross-channel interference. ISRS enters exclusively through the
//! per-channel effective lengths taken from the actual power profiles, which
//! is what makes the coefficients launch-power-dependent when ISRS is on.
//! Span contributions accumulate incoherently (coherence factor 1); FWM
//! island terms are out of scope.

use std::sync::Arc;

use rayon::prelude::*;

use crate::constants::C_M_S;
use crate::error::{Error, Result};
use crate::noise::LinkSpec;
use crate::raman::{effective_length, FiberSpan, PowerProfile};

/// Per-span NLI coefficients in 1/W²: `P_NLI,i = η_spm,i·P_i³ + Σ_j η_xpm[i][j]·P_i·P_j²`.
#[derive(Debug, Clone)]
pub struct NliCoefficients {
    pub eta_spm: Vec<f64>,
    /// Dense matrix, zero on the diagonal.
    pub eta_xpm: Vec<Vec<f64>>,
}

/// Group-velocity dispersion β₂ at a frequency, in ps²/km:
/// `β₂ = −D(λ)·λ²/(2πc)` with `D(λ) = D_ref + S_ref·(λ − λ_ref)`.
pub fn beta2_at(span: &FiberSpan, f_thz: f64) -> f64 {
    let lambda_nm = C_M_S / (f_thz * 1e12) * 1e9;
    let d = span.d_ref_ps_nm_km + span.s_ref_ps_nm2_km * (lambda_nm - span.lambda_ref_nm);
    // D in ps/(nm·km) = 1e-6 s/m²; λ in m; result converted to ps²/km.
    let d_si = d * 1e-6;
    let lambda_m = lambda_nm * 1e-9;
    let beta2_si = -d_si * lambda_m * lambda_m / (2.0 * std::f64::consts::PI * C_M_S);
    beta2_si * 1e27
}

fn beta2_si_checked(span: &FiberSpan, f_thz: f64) -> Result<f64> {
    let b2 = beta2_at(span, f_thz) * 1e-27;
    if b2.abs() < 1e-36 {
        return Err(Error::ZeroDispersion { f_thz });
    }
    Ok(b2)
}

/// Computes the per-span NLI coefficients from the span power profiles.
pub fn compute_eta(link: &LinkSpec, profiles: &[Arc<PowerProfile>]) -> Result<Vec<NliCoefficients>> {
    if profiles.len() != link.spans.len() {
        return Err(Error::InvalidLink(format!(
            "{} profiles for {} spans",
            profiles.len(),
            link.spans.len()
        )));
    }
    let mut out = Vec::with_capacity(link.spans.len());
    for (s, (span, profile)) in link.spans.iter().zip(profiles).enumerate() {
        // Identical spans with a shared profile get a shared coefficient set.
        if let Some(k) = (0..s).find(|&k| {
            link.spans[k] == *span && Arc::ptr_eq(&profiles[k], profile)
        }) {
            let prev: &NliCoefficients = &out[k];
            out.push(prev.clone());
            continue;
        }
        out.push(
            span_eta(link, span, profile)
                .map_err(|e| e.with_context(format!("span {s}")))?,
        );
    }
    Ok(out)
}

fn span_eta(link: &LinkSpec, span: &FiberSpan, profile: &PowerProfile) -> Result<NliCoefficients> {
    let grid = &link.grid;
    let n = grid.len();
    let f_thz: Vec<f64> = grid.frequencies_thz();

    // ISRS-dependent effective lengths, in meters.
    let l_eff_m: Vec<f64> = (0..n)
        .map(|i| effective_length(profile, i) * 1e3)
        .collect();
    // Asymptotic effective length 1/α, in meters.
    let l_asym_m: Vec<f64> = f_thz
        .iter()
        .map(|f| 1e3 / span.alpha_1_km(*f))
        .collect();
    let gamma_1_w_m: Vec<f64> = f_thz
        .iter()
        .map(|f| span.gamma_1_w_km.at(*f) / 1e3)
        .collect();
    let bw_hz: Vec<f64> = grid
        .channels()
        .iter()
        .map(|c| c.symbol_rate_gbaud * 1e9)
        .collect();

    let rows: Result<Vec<(f64, Vec<f64>)>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let beta2_i = beta2_si_checked(span, f_thz[i])?;
            let phi = beta2_i.abs() * l_asym_m[i] * bw_hz[i] * bw_hz[i];
            let eta_spm = (8.0 / 27.0) * gamma_1_w_m[i].powi(2) * l_eff_m[i].powi(2)
                / (std::f64::consts::PI * phi)
                * ((std::f64::consts::PI.powi(2) / 2.0) * phi).asinh();

            let mut row = vec![0.0; n];
            for j in 0..n {
                if j == i {
                    continue;
                }
                row[j] = xpm_coefficient(
                    span,
                    f_thz[i],
                    f_thz[j],
                    bw_hz[j],
                    l_eff_m[j],
                    l_asym_m[j],
                    i,
                    j,
                )?;
            }
            Ok((eta_spm, row))
        })
        .collect();

    let rows = rows?;
    Ok(NliCoefficients {
        eta_spm: rows.iter().map(|r| r.0).collect(),
        eta_xpm: rows.into_iter().map(|r| r.1).collect(),
    })
}

/// Cross-channel coefficient of interferer j on channel i, 1/W²
/// (multiplies `P_i·P_j²`).
#[allow(clippy::too_many_arguments)]
fn xpm_coefficient(
    span: &FiberSpan,
    f_i_thz: f64,
    f_j_thz: f64,
    bw_j_hz: f64,
    l_eff_j_m: f64,
    l_asym_j_m: f64,
    i: usize,
    j: usize,
) -> Result<f64> {
    let df_hz = (f_i_thz - f_j_thz).abs() * 1e12;
    if df_hz <= bw_j_hz / 2.0 {
        return Err(Error::OverlappingChannels {
            i,
            j,
            df_ghz: df_hz / 1e9,
        });
    }
    let f_mid = 0.5 * (f_i_thz + f_j_thz);
    let beta2 = beta2_si_checked(span, f_mid)?;
    let gamma = span.gamma_1_w_km.at(f_mid) / 1e3;
    let phi = beta2.abs() * l_asym_j_m * bw_j_hz * bw_j_hz;
    Ok(
        (16.0 / 27.0) * gamma * gamma * l_eff_j_m * l_eff_j_m
            / (2.0 * std::f64::consts::PI * phi)
            * ((df_hz + bw_j_hz / 2.0) / (df_hz - bw_j_hz / 2.0)).ln(),
    )
}

/// Total per-channel NLI power over the link, W. With re-equalization every
/// span launches the same spectrum, so the per-span launch equals the global
/// one and spans add incoherently.
pub fn nli_power(launch_w: &[f64], etas: &[NliCoefficients]) -> Vec<f64> {
    let n = launch_w.len();
    let mut p_nli = vec![0.0; n];
    for eta in etas {
        for i in 0..n {
            let mut acc = eta.eta_spm[i] * launch_w[i].powi(3);
            let row = &eta.eta_xpm[i];
            for j in 0..n {
                acc += row[j] * launch_w[i] * launch_w[j] * launch_w[j];
            }
            p_nli[i] += acc;
        }
    }
    p_nli
}
