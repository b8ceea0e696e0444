//! GSNR, OSNR, NLI-only GSNR, the 3-dB gap, and the GSNR→throughput mapping.

use serde::{Deserialize, Serialize};

use crate::constants::{lin_to_db, RULE_GAP_DB};
use crate::error::{Error, Result};

/// Everything known about one channel after a link evaluation. Ratios are
/// linear; conversion to dB happens at interfaces.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelReport {
    pub index: usize,
    pub f_center_thz: f64,
    pub band: String,
    pub p_launch_w: f64,
    pub p_ase_w: f64,
    pub p_nli_w: f64,
    pub osnr: f64,
    pub gsnr_nli: f64,
    pub gsnr: f64,
    pub throughput_gbps: f64,
}

/// Per-channel throughput vs. GSNR.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ThroughputCurve {
    /// Dual-polarization Shannon limit, `2·R·log2(1 + gsnr)`.
    Shannon,
    /// Monotone table of (GSNR dB, Gb/s) points, linearly interpolated and
    /// clamped at both ends.
    Table { points: Vec<(f64, f64)> },
}

impl ThroughputCurve {
    pub fn table(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidCurve("table needs at least two points".into()));
        }
        for w in points.windows(2) {
            if w[1].0 <= w[0].0 || w[1].1 <= w[0].1 {
                return Err(Error::InvalidCurve(
                    "table must be strictly increasing in both coordinates".into(),
                ));
            }
        }
        Ok(ThroughputCurve::Table { points })
    }

    /// A stand-in for a high-performance transponder: Shannon minus a 1.5 dB
    /// implementation gap, saturating at 14 bit/symbol (1.4 Tb/s at
    /// 100 GBaud).
    pub fn transponder(symbol_rate_gbaud: f64) -> Self {
        let gap_db = 1.5;
        let sat_gbps = 14.0 * symbol_rate_gbaud;
        let mut points = Vec::new();
        let mut g = -10.0;
        loop {
            let gbps =
                2.0 * symbol_rate_gbaud * (1.0 + 10f64.powf((g - gap_db) / 10.0)).log2();
            if gbps >= sat_gbps {
                break;
            }
            points.push((g, gbps));
            g += 1.0;
        }
        // Close the table exactly where the saturation level is reached.
        let x = (sat_gbps / (2.0 * symbol_rate_gbaud)).exp2() - 1.0;
        let g_sat = gap_db + 10.0 * x.log10();
        points.push((g_sat, sat_gbps));
        ThroughputCurve::Table { points }
    }
}

/// Generalized SNR, `P_ch/(P_ASE + P_NLI)`, as a linear ratio.
pub fn gsnr(p_launch_w: f64, p_ase_w: f64, p_nli_w: f64) -> Result<f64> {
    let denom = p_ase_w + p_nli_w;
    if !(denom > 0.0) {
        return Err(Error::ZeroGsnrDenominator);
    }
    Ok(p_launch_w / denom)
}

/// Per-channel throughput in Gb/s for a linear GSNR.
pub fn throughput(gsnr_lin: f64, symbol_rate_gbaud: f64, curve: &ThroughputCurve) -> f64 {
    match curve {
        ThroughputCurve::Shannon => 2.0 * symbol_rate_gbaud * (1.0 + gsnr_lin).log2(),
        ThroughputCurve::Table { points } => {
            let x = lin_to_db(gsnr_lin);
            if x <= points[0].0 {
                return points[0].1;
            }
            let last = points[points.len() - 1];
            if x >= last.0 {
                return last.1;
            }
            let k = points.partition_point(|p| p.0 <= x);
            let (x0, y0) = points[k - 1];
            let (x1, y1) = points[k];
            y0 + (y1 - y0) * (x - x0) / (x1 - x0)
        }
    }
}

/// Total throughput in Tb/s.
pub fn total_throughput(reports: &[ChannelReport]) -> f64 {
    reports.iter().map(|r| r.throughput_gbps).sum::<f64>() / 1e3
}

/// Gap between NLI-only GSNR and OSNR in dB; exactly +3.01 dB at the
/// 3-dB-rule operating point `P_NLI = P_ASE/2`.
pub fn gap_3db(report: &ChannelReport) -> f64 {
    10.0 * (report.gsnr_nli / report.osnr).log10()
}

/// The rule gap, `10·log10(2)` dB.
pub fn rule_gap_db() -> f64 {
    RULE_GAP_DB
}

/// Assembles a channel report from the accumulated powers.
pub fn make_report(
    index: usize,
    f_center_thz: f64,
    band: &str,
    p_launch_w: f64,
    p_ase_w: f64,
    p_nli_w: f64,
    symbol_rate_gbaud: f64,
    curve: &ThroughputCurve,
) -> Result<ChannelReport> {
    let g = gsnr(p_launch_w, p_ase_w, p_nli_w)?;
    let osnr = if p_ase_w > 0.0 { p_launch_w / p_ase_w } else { f64::INFINITY };
    let gsnr_nli = if p_nli_w > 0.0 { p_launch_w / p_nli_w } else { f64::INFINITY };
    Ok(ChannelReport {
        index,
        f_center_thz,
        band: band.to_string(),
        p_launch_w,
        p_ase_w,
        p_nli_w,
        osnr,
        gsnr_nli,
        gsnr: g,
        throughput_gbps: throughput(g, symbol_rate_gbaud, curve),
    })
}
