//! Machine-readable run outputs: per-channel CSV, summary JSON, plot TSV.
//!
//! Formatting is fixed-precision and struct-ordered so identical runs
//! produce byte-identical files.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;

use crate::config::ScenarioConfig;
use crate::constants::{lin_to_db, w_to_dbm};
use crate::error::Result;
use crate::metrics::{gap_3db, ChannelReport};
use crate::spectrum::LaunchSpectrum;

/// CSV format marker; bump when columns change.
pub const CSV_VERSION: &str = "multiband channel report v1";

fn db6(v: f64) -> String {
    format!("{:.6}", v)
}

/// Per-channel CSV with a versioned header comment.
pub fn channel_csv(reports: &[ChannelReport]) -> String {
    let mut out = String::new();
    out.push_str(&format!("# {CSV_VERSION}\n"));
    out.push_str(
        "index,f_THz,band,p_launch_dBm,p_ase_dBm,p_nli_dBm,osnr_dB,gsnr_nli_dB,gsnr_dB,gap_3db_dB,throughput_Gbps\n",
    );
    for r in reports {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            r.index,
            db6(r.f_center_thz),
            r.band,
            db6(w_to_dbm(r.p_launch_w)),
            db6(w_to_dbm(r.p_ase_w)),
            db6(w_to_dbm(r.p_nli_w)),
            db6(lin_to_db(r.osnr)),
            db6(lin_to_db(r.gsnr_nli)),
            db6(lin_to_db(r.gsnr)),
            db6(gap_3db(r)),
            db6(r.throughput_gbps),
        ));
    }
    out
}

/// Plot data mirroring the per-band figure panels: frequency against launch
/// power and the three dB curves.
pub fn plot_tsv(reports: &[ChannelReport]) -> String {
    let mut out = String::new();
    out.push_str("f_THz\tp_launch_dBm\tosnr_dB\tgsnr_nli_dB\tgsnr_dB\tgap_3db_dB\n");
    for r in reports {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\n",
            db6(r.f_center_thz),
            db6(w_to_dbm(r.p_launch_w)),
            db6(lin_to_db(r.osnr)),
            db6(lin_to_db(r.gsnr_nli)),
            db6(lin_to_db(r.gsnr)),
            db6(gap_3db(r)),
        ));
    }
    out
}

/// Launch spectrum in interface units for the summary.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum SpectrumEcho {
    Cubic { coeffs_dbm: BTreeMap<String, [f64; 4]> },
    Explicit { powers_dbm: Vec<f64> },
}

impl From<&LaunchSpectrum> for SpectrumEcho {
    fn from(s: &LaunchSpectrum) -> Self {
        match s {
            LaunchSpectrum::PerBandCubic { coeffs_dbm } => SpectrumEcho::Cubic {
                coeffs_dbm: coeffs_dbm.clone(),
            },
            LaunchSpectrum::Explicit { powers_w } => SpectrumEcho::Explicit {
                powers_dbm: powers_w.iter().map(|p| w_to_dbm(*p)).collect(),
            },
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepPoint {
    pub power_dbm: f64,
    pub total_tbps: f64,
}

/// Summary of one run; the config echo is sufficient to reproduce it.
#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub mode: String,
    pub total_tbps: f64,
    pub gsnr_min_db: f64,
    pub gsnr_max_db: f64,
    pub gsnr_peak_to_peak_db: f64,
    pub gap_3db_mean_db: f64,
    pub gap_3db_min_db: f64,
    pub gap_3db_max_db: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub converged: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub restarts_used: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual_db: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<SpectrumEcho>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<Vec<SweepPoint>>,
    pub config: ScenarioConfig,
}

impl RunSummary {
    pub fn new(mode: &str, reports: &[ChannelReport], total_tbps: f64, config: ScenarioConfig) -> Self {
        let gsnr_db: Vec<f64> = reports.iter().map(|r| lin_to_db(r.gsnr)).collect();
        let gaps: Vec<f64> = reports.iter().map(gap_3db).collect();
        let min = |v: &[f64]| v.iter().copied().fold(f64::INFINITY, f64::min);
        let max = |v: &[f64]| v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let gsnr_min = min(&gsnr_db);
        let gsnr_max = max(&gsnr_db);
        Self {
            mode: mode.to_string(),
            total_tbps,
            gsnr_min_db: gsnr_min,
            gsnr_max_db: gsnr_max,
            gsnr_peak_to_peak_db: gsnr_max - gsnr_min,
            gap_3db_mean_db: gaps.iter().sum::<f64>() / gaps.len().max(1) as f64,
            gap_3db_min_db: min(&gaps),
            gap_3db_max_db: max(&gaps),
            converged: None,
            iterations: None,
            restarts_used: None,
            residual_db: None,
            spectrum: None,
            sweep: None,
            config,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("summary serializes");
        s.push('\n');
        s
    }
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    std::fs::write(path, contents)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::make_report;
    use crate::metrics::ThroughputCurve;

    fn reports() -> Vec<ChannelReport> {
        vec![
            make_report(0, 193.5, "C", 1e-3, 1e-5, 5e-6, 100.0, &ThroughputCurve::Shannon)
                .unwrap(),
            make_report(1, 193.6, "C", 1e-3, 1e-5, 2e-6, 100.0, &ThroughputCurve::Shannon)
                .unwrap(),
        ]
    }

    #[test]
    fn csv_has_versioned_header_and_rows() {
        let csv = channel_csv(&reports());
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "# multiband channel report v1");
        assert!(lines.next().unwrap().starts_with("index,f_THz,band,"));
        assert_eq!(lines.count(), 2);
        assert!(csv.contains("0,193.500000,C,0.000000,"));
    }

    #[test]
    fn csv_is_deterministic() {
        assert_eq!(channel_csv(&reports()), channel_csv(&reports()));
    }

    #[test]
    fn summary_serializes_in_order() {
        let cfg = crate::config::parse_config(
            r#"
[grid]
spacing_ghz = 200.0
symbol_rate_gbaud = 100.0
roll_off = 0.1

[[bands]]
name = "C"
f_min_thz = 193.4
f_max_thz = 193.6

[link]
span_count = 1

[fiber]
length_km = 100.0
alpha_db_km = 0.2
dispersion_ps_nm_km = 17.0
gamma_1_w_km = 1.3

[fiber.raman]
shape = "triangular"
slope_1_w_km_thz = 0.028
cutoff_thz = 14.0

[amplifier]
nf_db = { C = 5.0 }
"#,
        )
        .unwrap();
        let summary = RunSummary::new("simulate", &reports(), 1.5, cfg);
        let json = summary.to_json();
        assert!(json.starts_with("{\n  \"mode\": \"simulate\""));
        assert!(json.contains("\"total_tbps\": 1.5"));
        assert!(json.contains("\"config\""));
        // Optional summary fields absent when unset (the config echo still
        // carries its own sweep section).
        assert!(!json.contains("\"residual_db\""));
        assert!(!json.contains("\"sweep\": ["));
    }
}
