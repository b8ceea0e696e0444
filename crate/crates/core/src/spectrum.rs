//! Band plans, channel grids, and the parametric launch-power spectrum.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::constants::dbm_to_w;
use crate::error::{Error, Result};

/// One transmission band: a named frequency interval in THz.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub name: String,
    pub f_min_thz: f64,
    pub f_max_thz: f64,
}

impl Band {
    pub fn width_ghz(&self) -> f64 {
        (self.f_max_thz - self.f_min_thz) * 1e3
    }

    pub fn contains(&self, f_thz: f64) -> bool {
        f_thz > self.f_min_thz && f_thz < self.f_max_thz
    }
}

/// An ordered set of disjoint bands, ascending in frequency.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandPlan {
    bands: Vec<Band>,
}

impl BandPlan {
    pub fn new(bands: Vec<Band>) -> Result<Self> {
        if bands.is_empty() {
            return Err(Error::InvalidBandPlan("no bands".into()));
        }
        for b in &bands {
            if !(b.f_max_thz > b.f_min_thz) {
                return Err(Error::InvalidBandPlan(format!(
                    "band `{}` has f_max ({}) ≤ f_min ({})",
                    b.name, b.f_max_thz, b.f_min_thz
                )));
            }
        }
        for w in bands.windows(2) {
            if w[1].f_min_thz < w[0].f_max_thz {
                return Err(Error::InvalidBandPlan(format!(
                    "bands `{}` and `{}` overlap or are out of order",
                    w[0].name, w[1].name
                )));
            }
        }
        let mut names: Vec<&str> = bands.iter().map(|b| b.name.as_str()).collect();
        names.sort_unstable();
        names.dedup();
        if names.len() != bands.len() {
            return Err(Error::InvalidBandPlan("duplicate band name".into()));
        }
        Ok(Self { bands })
    }

    pub fn bands(&self) -> &[Band] {
        &self.bands
    }

    pub fn band(&self, name: &str) -> Option<&Band> {
        self.bands.iter().find(|b| b.name == name)
    }
}

/// A single WDM channel on the grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Channel {
    pub index: usize,
    pub f_center_thz: f64,
    pub symbol_rate_gbaud: f64,
    pub roll_off: f64,
    pub band: String,
}

impl Channel {
    /// Occupied bandwidth `R·(1+roll_off)` in GHz.
    pub fn occupied_ghz(&self) -> f64 {
        self.symbol_rate_gbaud * (1.0 + self.roll_off)
    }
}

/// The WDM comb, sorted by ascending center frequency.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelGrid {
    channels: Vec<Channel>,
}

impl ChannelGrid {
    /// Validates ordering and pairwise non-overlap of occupied bands.
    pub fn new(channels: Vec<Channel>) -> Result<Self> {
        if channels.is_empty() {
            return Err(Error::InvalidGrid("no channels".into()));
        }
        for (k, ch) in channels.iter().enumerate() {
            if ch.index != k {
                return Err(Error::InvalidGrid(format!(
                    "channel {} carries index {}",
                    k, ch.index
                )));
            }
            if !(ch.symbol_rate_gbaud > 0.0) || !(0.0..=1.0).contains(&ch.roll_off) {
                return Err(Error::InvalidGrid(format!(
                    "channel {} has invalid symbol rate or roll-off",
                    k
                )));
            }
        }
        for w in channels.windows(2) {
            if w[1].f_center_thz <= w[0].f_center_thz {
                return Err(Error::InvalidGrid(format!(
                    "channels {} and {} not strictly ascending in frequency",
                    w[0].index, w[1].index
                )));
            }
            let df_ghz = (w[1].f_center_thz - w[0].f_center_thz) * 1e3;
            let half_sum = 0.5 * (w[0].occupied_ghz() + w[1].occupied_ghz());
            if df_ghz < half_sum {
                return Err(Error::InvalidGrid(format!(
                    "channels {} and {} overlap (spacing {:.3} GHz < {:.3} GHz)",
                    w[0].index, w[1].index, df_ghz, half_sum
                )));
            }
        }
        Ok(Self { channels })
    }

    pub fn channels(&self) -> &[Channel] {
        &self.channels
    }

    pub fn len(&self) -> usize {
        self.channels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.channels.is_empty()
    }

    pub fn frequencies_thz(&self) -> Vec<f64> {
        self.channels.iter().map(|c| c.f_center_thz).collect()
    }

    /// Center of the whole comb, THz.
    pub fn comb_center_thz(&self) -> f64 {
        let lo = self.channels.first().unwrap().f_center_thz;
        let hi = self.channels.last().unwrap().f_center_thz;
        0.5 * (lo + hi)
    }

    /// Normalized position of a channel within its band's channel set:
    /// 0 at the lowest channel, 1 at the highest, 0 for a single channel.
    pub fn normalized_position(&self, index: usize) -> f64 {
        let ch = &self.channels[index];
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for c in &self.channels {
            if c.band == ch.band {
                lo = lo.min(c.f_center_thz);
                hi = hi.max(c.f_center_thz);
            }
        }
        if hi > lo {
            (ch.f_center_thz - lo) / (hi - lo)
        } else {
            0.0
        }
    }

    /// Indices of channels belonging to the named band.
    pub fn band_channels(&self, band: &str) -> Vec<usize> {
        self.channels
            .iter()
            .filter(|c| c.band == band)
            .map(|c| c.index)
            .collect()
    }
}

/// Launch-power spectrum: either a cubic polynomial per band (in dBm, over
/// the normalized in-band position x ∈ [0, 1]) or explicit per-channel
/// powers in W.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum LaunchSpectrum {
    PerBandCubic {
        /// Band name → [c0, c1, c2, c3], dBm at x via c0 + c1·x + c2·x² + c3·x³.
        coeffs_dbm: BTreeMap<String, [f64; 4]>,
    },
    Explicit {
        powers_w: Vec<f64>,
    },
}

impl LaunchSpectrum {
    /// A frequency-flat spectrum at the given per-channel power.
    pub fn flat_dbm(plan: &BandPlan, power_dbm: f64) -> Self {
        let coeffs_dbm = plan
            .bands()
            .iter()
            .map(|b| (b.name.clone(), [power_dbm, 0.0, 0.0, 0.0]))
            .collect();
        LaunchSpectrum::PerBandCubic { coeffs_dbm }
    }
}

/// Builds the channel grid for a band plan: per band, the maximum number of
/// channels whose centers fit strictly inside the band on a uniform grid of
/// the given spacing, placed symmetrically (equal guard margins).
pub fn build_grid(
    plan: &BandPlan,
    spacing_ghz: f64,
    symbol_rate_gbaud: f64,
    roll_off: f64,
) -> Result<ChannelGrid> {
    let occupied_ghz = symbol_rate_gbaud * (1.0 + roll_off);
    if !(spacing_ghz >= occupied_ghz) {
        return Err(Error::InvalidGrid(format!(
            "spacing {:.3} GHz smaller than occupied bandwidth {:.3} GHz",
            spacing_ghz, occupied_ghz
        )));
    }
    let mut channels = Vec::new();
    let mut index = 0;
    for band in plan.bands() {
        let width_ghz = band.width_ghz();
        if width_ghz < occupied_ghz {
            return Err(Error::BandTooNarrow {
                band: band.name.clone(),
                needed_ghz: occupied_ghz,
                width_ghz,
            });
        }
        // (n-1)·spacing must stay strictly below the band width so that the
        // outermost centers keep a positive guard margin.
        let n = (width_ghz / spacing_ghz).ceil().max(1.0) as usize;
        let margin_ghz = 0.5 * (width_ghz - (n as f64 - 1.0) * spacing_ghz);
        for k in 0..n {
            let f_center_thz =
                band.f_min_thz + (margin_ghz + k as f64 * spacing_ghz) * 1e-3;
            channels.push(Channel {
                index,
                f_center_thz,
                symbol_rate_gbaud,
                roll_off,
                band: band.name.clone(),
            });
            index += 1;
        }
    }
    ChannelGrid::new(channels)
}

/// Evaluates a launch spectrum on a grid, returning per-channel powers in W.
pub fn eval_launch(spec: &LaunchSpectrum, grid: &ChannelGrid) -> Result<Vec<f64>> {
    match spec {
        LaunchSpectrum::PerBandCubic { coeffs_dbm } => {
            let mut powers = Vec::with_capacity(grid.len());
            for ch in grid.channels() {
                let c = coeffs_dbm
                    .get(&ch.band)
                    .ok_or_else(|| Error::MissingBandCoefficients(ch.band.clone()))?;
                let x = grid.normalized_position(ch.index);
                let dbm = c[0] + x * (c[1] + x * (c[2] + x * c[3]));
                if !dbm.is_finite() {
                    return Err(Error::InvalidLaunch(format!(
                        "cubic evaluates to non-finite dBm for channel {}",
                        ch.index
                    )));
                }
                powers.push(dbm_to_w(dbm));
            }
            Ok(powers)
        }
        LaunchSpectrum::Explicit { powers_w } => {
            if powers_w.len() != grid.len() {
                return Err(Error::InvalidLaunch(format!(
                    "{} powers for {} channels",
                    powers_w.len(),
                    grid.len()
                )));
            }
            if let Some(k) = powers_w.iter().position(|p| !(*p > 0.0) || !p.is_finite()) {
                return Err(Error::InvalidLaunch(format!(
                    "non-positive power for channel {}",
                    k
                )));
            }
            Ok(powers_w.clone())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn cls_plan() -> BandPlan {
        BandPlan::new(vec![
            Band { name: "L".into(), f_min_thz: 184.50, f_max_thz: 190.35 },
            Band { name: "C".into(), f_min_thz: 190.75, f_max_thz: 196.60 },
            Band { name: "S".into(), f_min_thz: 197.00, f_max_thz: 202.85 },
        ])
        .unwrap()
    }

    #[test]
    fn l_band_holds_fifty_channels() {
        let plan = BandPlan::new(vec![Band {
            name: "L".into(),
            f_min_thz: 184.50,
            f_max_thz: 190.35,
        }])
        .unwrap();
        let grid = build_grid(&plan, 118.75, 100.0, 0.1).unwrap();
        assert_eq!(grid.len(), 50);
        let span_thz = grid.channels().last().unwrap().f_center_thz
            - grid.channels().first().unwrap().f_center_thz;
        assert!((span_thz - 49.0 * 0.11875).abs() < 1e-9);
        assert!(span_thz <= 5.85);
        // Symmetric guard margins.
        let lead = grid.channels().first().unwrap().f_center_thz - 184.50;
        let trail = 190.35 - grid.channels().last().unwrap().f_center_thz;
        assert!((lead - trail).abs() < 1e-9);
    }

    #[test]
    fn single_channel_band_at_center() {
        let plan = BandPlan::new(vec![Band {
            name: "X".into(),
            f_min_thz: 190.0,
            f_max_thz: 191.0,
        }])
        .unwrap();
        let grid = build_grid(&plan, 1000.0, 100.0, 0.1).unwrap();
        assert_eq!(grid.len(), 1);
        assert!((grid.channels()[0].f_center_thz - 190.5).abs() < 1e-12);
    }

    #[test]
    fn cls_plan_has_150_channels() {
        let grid = build_grid(&cls_plan(), 118.75, 100.0, 0.1).unwrap();
        assert_eq!(grid.len(), 150);
        for band in ["L", "C", "S"] {
            assert_eq!(grid.band_channels(band).len(), 50);
        }
    }

    #[test]
    fn build_grid_is_deterministic() {
        let a = build_grid(&cls_plan(), 118.75, 100.0, 0.1).unwrap();
        let b = build_grid(&cls_plan(), 118.75, 100.0, 0.1).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn band_too_narrow_names_the_band() {
        let plan = BandPlan::new(vec![Band {
            name: "tiny".into(),
            f_min_thz: 190.0,
            f_max_thz: 190.05,
        }])
        .unwrap();
        match build_grid(&plan, 118.75, 100.0, 0.1) {
            Err(Error::BandTooNarrow { band, .. }) => assert_eq!(band, "tiny"),
            other => panic!("expected BandTooNarrow, got {:?}", other),
        }
    }

    #[test]
    fn flat_cubic_converts_dbm() {
        let grid = build_grid(&cls_plan(), 118.75, 100.0, 0.1).unwrap();
        let spec = LaunchSpectrum::flat_dbm(&cls_plan(), 5.0);
        let p = eval_launch(&spec, &grid).unwrap();
        for w in &p {
            assert!((w - 3.162_277_660_168e-3).abs() < 1e-12);
        }
        let spec0 = LaunchSpectrum::flat_dbm(&cls_plan(), 0.0);
        let p0 = eval_launch(&spec0, &grid).unwrap();
        for w in &p0 {
            assert!((w - 1.0e-3).abs() < 1e-15);
        }
    }

    #[test]
    fn cubic_swing_over_superband() {
        // A single band spanning the full comb with a linear tilt term.
        let plan = BandPlan::new(vec![Band {
            name: "ALL".into(),
            f_min_thz: 184.50,
            f_max_thz: 202.85,
        }])
        .unwrap();
        let grid = build_grid(&plan, 118.75, 100.0, 0.1).unwrap();
        let mut coeffs = BTreeMap::new();
        coeffs.insert("ALL".to_string(), [-3.5, 13.1, 0.0, 0.0]);
        let spec = LaunchSpectrum::PerBandCubic { coeffs_dbm: coeffs };
        let p = eval_launch(&spec, &grid).unwrap();
        assert!((p[0] - dbm_to_w(-3.5)).abs() < 1e-12);
        assert!((p[grid.len() - 1] - dbm_to_w(9.6)).abs() < 1e-12);
    }

    #[test]
    fn c0_shift_scales_band_powers() {
        let grid = build_grid(&cls_plan(), 118.75, 100.0, 0.1).unwrap();
        let mut coeffs = BTreeMap::new();
        coeffs.insert("L".to_string(), [1.0, 2.0, -0.5, 0.25]);
        coeffs.insert("C".to_string(), [0.0, 0.0, 0.0, 0.0]);
        coeffs.insert("S".to_string(), [-2.0, 1.0, 0.0, 0.0]);
        let base = eval_launch(&LaunchSpectrum::PerBandCubic { coeffs_dbm: coeffs.clone() }, &grid)
            .unwrap();
        coeffs.get_mut("C").unwrap()[0] += 1.0;
        let shifted =
            eval_launch(&LaunchSpectrum::PerBandCubic { coeffs_dbm: coeffs }, &grid).unwrap();
        let factor = 10f64.powf(0.1);
        for i in 0..grid.len() {
            let expect = if grid.channels()[i].band == "C" {
                base[i] * factor
            } else {
                base[i]
            };
            assert!((shifted[i] / expect - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn explicit_round_trip() {
        let grid = build_grid(&cls_plan(), 118.75, 100.0, 0.1).unwrap();
        let spec = LaunchSpectrum::flat_dbm(&cls_plan(), 2.0);
        let p = eval_launch(&spec, &grid).unwrap();
        let p2 = eval_launch(&LaunchSpectrum::Explicit { powers_w: p.clone() }, &grid).unwrap();
        assert_eq!(p, p2);
    }

    #[test]
    fn missing_band_coefficients_error() {
        let grid = build_grid(&cls_plan(), 118.75, 100.0, 0.1).unwrap();
        let mut coeffs = BTreeMap::new();
        coeffs.insert("L".to_string(), [0.0; 4]);
        let spec = LaunchSpectrum::PerBandCubic { coeffs_dbm: coeffs };
        match eval_launch(&spec, &grid) {
            Err(Error::MissingBandCoefficients(b)) => assert_eq!(b, "C"),
            other => panic!("expected MissingBandCoefficients, got {:?}", other),
        }
    }
}
