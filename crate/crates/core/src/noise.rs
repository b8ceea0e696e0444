//! Amplifier gain policy and accumulated ASE power per channel.
//!
//! The only gain policy in v1 is re-equalization: after each span the
//! amplifier restores every channel to its launch power, so each span sees
//! the same input spectrum and ASE contributions add linearly.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::constants::{db_to_lin, PLANCK_J_S};
use crate::error::{Error, Result};
use crate::ode::StepControl;
use crate::raman::{propagate, pure_loss_profile, FiberSpan, PowerProfile};
use crate::spectrum::{BandPlan, ChannelGrid};

/// Per-band amplifier noise figures, dB. One amplifier closes each span.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmplifierSpec {
    pub nf_db: std::collections::BTreeMap<String, f64>,
}

impl AmplifierSpec {
    pub fn nf_lin(&self, band: &str) -> Result<f64> {
        let nf_db = self
            .nf_db
            .get(band)
            .ok_or_else(|| Error::InvalidLink(format!("no noise figure for band `{band}`")))?;
        Ok(db_to_lin(*nf_db))
    }
}

/// The complete system under study: ordered spans, their amplifiers, the
/// channel grid, and the ISRS toggle.
#[derive(Debug, Clone)]
pub struct LinkSpec {
    pub plan: BandPlan,
    pub grid: ChannelGrid,
    pub spans: Vec<FiberSpan>,
    pub amps: Vec<AmplifierSpec>,
    pub isrs_enabled: bool,
    /// ASE accounting bandwidth per channel, GHz.
    pub noise_bandwidth_ghz: f64,
}

impl LinkSpec {
    pub fn validate(&self) -> Result<()> {
        if self.spans.is_empty() {
            return Err(Error::InvalidLink("no spans".into()));
        }
        if self.amps.len() != self.spans.len() {
            return Err(Error::InvalidLink(format!(
                "{} amplifiers for {} spans",
                self.amps.len(),
                self.spans.len()
            )));
        }
        if !(self.noise_bandwidth_ghz > 0.0) {
            return Err(Error::InvalidLink("noise bandwidth must be positive".into()));
        }
        for span in &self.spans {
            span.validate(&self.grid)?;
        }
        for amp in &self.amps {
            for band in self.plan.bands() {
                let nf = amp
                    .nf_db
                    .get(&band.name)
                    .ok_or_else(|| {
                        Error::InvalidLink(format!("no noise figure for band `{}`", band.name))
                    })?;
                if *nf < 0.0 {
                    return Err(Error::InvalidLink(format!(
                        "negative noise figure for band `{}`",
                        band.name
                    )));
                }
            }
        }
        Ok(())
    }

    /// A copy with ISRS forced off (pure-loss profiles).
    pub fn with_isrs(&self, enabled: bool) -> Self {
        let mut link = self.clone();
        link.isrs_enabled = enabled;
        link
    }
}

/// Solves each span's power profile for a common launch spectrum
/// (re-equalization makes every span input equal the launch). Identical
/// spans share one solution.
pub fn span_profiles(
    link: &LinkSpec,
    launch_w: &[f64],
    ctrl: &StepControl,
) -> Result<Vec<Arc<PowerProfile>>> {
    let mut profiles: Vec<Arc<PowerProfile>> = Vec::with_capacity(link.spans.len());
    for (s, span) in link.spans.iter().enumerate() {
        if let Some(k) = link.spans[..s].iter().position(|prev| prev == span) {
            profiles.push(Arc::clone(&profiles[k]));
            continue;
        }
        let profile = if link.isrs_enabled {
            propagate(span, launch_w, &link.grid, ctrl)
                .map_err(|e| e.with_context(format!("span {s}")))?
        } else {
            pure_loss_profile(span, launch_w, &link.grid, ctrl.max_step)
                .map_err(|e| e.with_context(format!("span {s}")))?
        };
        profiles.push(Arc::new(profile));
    }
    Ok(profiles)
}

/// Re-equalizing gains for one span: `G_i = launch_i / P_i(L)`. Gains below
/// one model ideal (noiseless) attenuation of over-amplified channels.
pub fn amp_gains(profile: &PowerProfile, launch_w: &[f64]) -> Vec<f64> {
    profile
        .output_powers()
        .iter()
        .zip(launch_w)
        .map(|(out, target)| target / out)
        .collect()
}

/// Accumulated ASE per channel over the whole link, W:
/// `Σ_spans h·f_i·B_n·(G_i·NF_i − 1)` for spans where `G_i ≥ 1`, zero
/// otherwise (ideal attenuation adds no noise).
pub fn ase_from_profiles(
    link: &LinkSpec,
    launch_w: &[f64],
    profiles: &[Arc<PowerProfile>],
) -> Result<Vec<f64>> {
    let bn_hz = link.noise_bandwidth_ghz * 1e9;
    let mut p_ase = vec![0.0; link.grid.len()];
    for (amp, profile) in link.amps.iter().zip(profiles) {
        let gains = amp_gains(profile, launch_w);
        for (i, ch) in link.grid.channels().iter().enumerate() {
            let g = gains[i];
            if g >= 1.0 {
                let nf = amp.nf_lin(&ch.band)?;
                p_ase[i] += PLANCK_J_S * ch.f_center_thz * 1e12 * bn_hz * (g * nf - 1.0);
            }
        }
    }
    Ok(p_ase)
}

/// Convenience wrapper solving the profiles internally.
pub fn ase_accumulate(link: &LinkSpec, launch_w: &[f64]) -> Result<Vec<f64>> {
    let profiles = span_profiles(link, launch_w, &StepControl::default())?;
    ase_from_profiles(link, launch_w, &profiles)
}
