//! Scenario configuration: a single TOML file describing bands, grid,
//! fibers, amplifiers, launch, optimizer and output options.
//!
//! Unknown keys are rejected with a complete list (no silent ignore), and
//! `key=value` overrides are applied on the raw TOML before validation so
//! they go through the same checks.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::ThroughputCurve;
use crate::noise::{AmplifierSpec, LinkSpec};
use crate::ode::StepControl;
use crate::optimizer::{EnforceOpts, OptimizerOpts};
use crate::raman::{FiberSpan, FreqTable, RamanGain, RamanGainSpec};
use crate::spectrum::{build_grid, Band, BandPlan, LaunchSpectrum};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub grid: GridCfg,
    pub bands: Vec<BandCfg>,
    pub link: LinkCfg,
    pub fiber: FiberCfg,
    pub amplifier: AmplifierCfg,
    #[serde(default)]
    pub launch: LaunchCfg,
    #[serde(default)]
    pub throughput: ThroughputCfg,
    #[serde(default)]
    pub optimizer: OptimizerCfg,
    #[serde(default)]
    pub enforce: EnforceCfg,
    #[serde(default)]
    pub solver: SolverCfg,
    #[serde(default)]
    pub sweep: SweepCfg,
    #[serde(default)]
    pub oracle: OracleCfg,
    #[serde(default)]
    pub output: OutputCfg,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridCfg {
    pub spacing_ghz: f64,
    pub symbol_rate_gbaud: f64,
    pub roll_off: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BandCfg {
    pub name: String,
    pub f_min_thz: f64,
    pub f_max_thz: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkCfg {
    #[serde(default = "default_true")]
    pub isrs: bool,
    pub span_count: usize,
    /// Defaults to the symbol rate when omitted.
    pub noise_bandwidth_ghz: Option<f64>,
}

/// A scalar value or an inline (frequency, value) table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarOrTable {
    Scalar(f64),
    Table(Vec<(f64, f64)>),
}

impl ScalarOrTable {
    fn to_freq_table(&self, what: &str) -> Result<FreqTable> {
        match self {
            ScalarOrTable::Scalar(v) => Ok(FreqTable::constant(*v)),
            ScalarOrTable::Table(points) => FreqTable::new(points.clone())
                .map_err(|e| Error::Config(format!("{what}: {e}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberCfg {
    pub length_km: f64,
    /// dB/km, scalar or (THz, dB/km) table.
    pub alpha_db_km: Option<ScalarOrTable>,
    /// Two-column file alternative to `alpha_db_km`.
    pub alpha_file: Option<PathBuf>,
    pub dispersion_ps_nm_km: f64,
    #[serde(default)]
    pub dispersion_slope_ps_nm2_km: f64,
    #[serde(default = "default_lambda_ref")]
    pub lambda_ref_nm: f64,
    /// 1/(W·km), scalar or (THz, value) table.
    pub gamma_1_w_km: Option<ScalarOrTable>,
    pub gamma_file: Option<PathBuf>,
    pub raman: RamanCfg,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RamanCfg {
    /// "triangular" or "table".
    pub shape: String,
    pub slope_1_w_km_thz: Option<f64>,
    pub cutoff_thz: Option<f64>,
    /// (Δf THz, Cr 1/(W·km)) pairs for shape = "table".
    pub points: Option<Vec<(f64, f64)>>,
    pub points_file: Option<PathBuf>,
    #[serde(default = "default_true")]
    pub photon_flux_correction: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmplifierCfg {
    /// Band name → noise figure, dB.
    pub nf_db: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LaunchCfg {
    /// "flat", "cubic" or "explicit".
    pub shape: String,
    pub power_dbm: Option<f64>,
    /// Band name → [c0, c1, c2, c3] in dBm for shape = "cubic".
    pub coeffs_dbm: Option<BTreeMap<String, [f64; 4]>>,
    pub powers_dbm: Option<Vec<f64>>,
}

impl Default for LaunchCfg {
    fn default() -> Self {
        Self {
            shape: "flat".into(),
            power_dbm: Some(0.0),
            coeffs_dbm: None,
            powers_dbm: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThroughputCfg {
    /// "shannon", "transponder" or "table".
    pub curve: String,
    pub table_points: Option<Vec<(f64, f64)>>,
}

impl Default for ThroughputCfg {
    fn default() -> Self {
        Self {
            curve: "shannon".into(),
            table_points: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OptimizerCfg {
    pub restarts: usize,
    pub max_evals: usize,
    pub x_tol_db: f64,
    pub f_tol_rel: f64,
    pub seed: u64,
    pub power_min_dbm: f64,
    pub power_max_dbm: f64,
}

impl Default for OptimizerCfg {
    fn default() -> Self {
        let o = OptimizerOpts::default();
        Self {
            restarts: o.restarts,
            max_evals: o.max_evals,
            x_tol_db: o.x_tol_db,
            f_tol_rel: o.f_tol_rel,
            seed: o.seed,
            power_min_dbm: o.power_min_dbm,
            power_max_dbm: o.power_max_dbm,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EnforceCfg {
    pub tol_db: f64,
    pub max_iters: usize,
    pub damping: f64,
}

impl Default for EnforceCfg {
    fn default() -> Self {
        let e = EnforceOpts::default();
        Self {
            tol_db: e.tol_db,
            max_iters: e.max_iters,
            damping: e.damping,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverCfg {
    pub rel_tol: f64,
    pub max_step_km: f64,
}

impl Default for SolverCfg {
    fn default() -> Self {
        let c = StepControl::default();
        Self {
            rel_tol: c.rel_tol,
            max_step_km: c.max_step,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepCfg {
    pub start_dbm: f64,
    pub stop_dbm: f64,
    pub step_db: f64,
}

impl Default for SweepCfg {
    fn default() -> Self {
        Self {
            start_dbm: -6.0,
            stop_dbm: 9.0,
            step_db: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OracleCfg {
    pub channel: usize,
    pub points_per_axis: usize,
}

impl Default for OracleCfg {
    fn default() -> Self {
        Self {
            channel: 0,
            points_per_axis: 96,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputCfg {
    pub csv: bool,
    pub plot_data: bool,
}

impl Default for OutputCfg {
    fn default() -> Self {
        Self {
            csv: true,
            plot_data: false,
        }
    }
}

fn default_true() -> bool {
    true
}

fn default_lambda_ref() -> f64 {
    1550.0
}

/// A fully built scenario, ready to run.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub config: ScenarioConfig,
    pub link: LinkSpec,
    pub curve: ThroughputCurve,
    pub launch: LaunchSpectrum,
    pub optimizer: OptimizerOpts,
    pub enforce: EnforceOpts,
    pub solver: StepControl,
}

/// Parses TOML text, rejecting unknown keys with a full list.
pub fn parse_config(text: &str) -> Result<ScenarioConfig> {
    let table: toml::Table = text
        .parse()
        .map_err(|e| Error::Config(format!("TOML parse error: {e}")))?;
    config_from_value(toml::Value::Table(table))
}

pub fn config_from_value(value: toml::Value) -> Result<ScenarioConfig> {
    let mut unknown = Vec::new();
    let cfg: ScenarioConfig = serde_ignored::deserialize(value, |path| {
        unknown.push(path.to_string());
    })
    .map_err(|e| Error::Config(e.to_string()))?;
    if !unknown.is_empty() {
        return Err(Error::Config(format!(
            "unknown config keys: {}",
            unknown.join(", ")
        )));
    }
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<ScenarioConfig> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text)
}

/// Reads raw TOML for override editing.
pub fn load_raw(path: &Path) -> Result<toml::Value> {
    let text = std::fs::read_to_string(path)?;
    let table: toml::Table = text
        .parse()
        .map_err(|e| Error::Config(format!("TOML parse error: {e}")))?;
    Ok(toml::Value::Table(table))
}

/// Applies a dotted-path `key=value` override onto raw TOML. Values parse as
/// TOML literals where possible ("on"/"off" are accepted for booleans);
/// anything else becomes a string.
pub fn apply_override(root: &mut toml::Value, key: &str, value: &str) -> Result<()> {
    let parts: Vec<&str> = key.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(Error::Config(format!("bad override key `{key}`")));
    }
    let parsed = parse_override_value(value);
    let mut node = root;
    for part in &parts[..parts.len() - 1] {
        let table = node
            .as_table_mut()
            .ok_or_else(|| Error::Config(format!("override `{key}` traverses a non-table")))?;
        node = table
            .entry(part.to_string())
            .or_insert_with(|| toml::Value::Table(Default::default()));
    }
    let table = node
        .as_table_mut()
        .ok_or_else(|| Error::Config(format!("override `{key}` traverses a non-table")))?;
    table.insert(parts[parts.len() - 1].to_string(), parsed);
    Ok(())
}

fn parse_override_value(value: &str) -> toml::Value {
    match value {
        "on" | "true" => return toml::Value::Boolean(true),
        "off" | "false" => return toml::Value::Boolean(false),
        _ => {}
    }
    value
        .parse::<toml::Value>()
        .unwrap_or_else(|_| toml::Value::String(value.to_string()))
}

fn read_two_column_file(path: &Path) -> Result<Vec<(f64, f64)>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read `{}`: {e}", path.display())))?;
    let mut points = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .collect();
        if fields.len() != 2 {
            return Err(Error::Config(format!(
                "{}:{}: expected two columns",
                path.display(),
                lineno + 1
            )));
        }
        let parse = |s: &str| -> Result<f64> {
            s.parse::<f64>().map_err(|_| {
                Error::Config(format!(
                    "{}:{}: bad number `{s}`",
                    path.display(),
                    lineno + 1
                ))
            })
        };
        points.push((parse(fields[0])?, parse(fields[1])?));
    }
    Ok(points)
}

impl ScenarioConfig {
    /// A copy with every optional default resolved, suitable for echoing
    /// into the summary so a run can be reproduced exactly.
    pub fn resolved(&self) -> ScenarioConfig {
        let mut cfg = self.clone();
        if cfg.link.noise_bandwidth_ghz.is_none() {
            cfg.link.noise_bandwidth_ghz = Some(cfg.grid.symbol_rate_gbaud);
        }
        cfg
    }

    /// Builds the runnable scenario, validating everything.
    pub fn build(&self, base_dir: &Path) -> Result<Scenario> {
        let cfg = self.resolved();

        let bands: Vec<Band> = cfg
            .bands
            .iter()
            .map(|b| Band {
                name: b.name.clone(),
                f_min_thz: b.f_min_thz,
                f_max_thz: b.f_max_thz,
            })
            .collect();
        let plan = BandPlan::new(bands)?;
        let grid = build_grid(
            &plan,
            cfg.grid.spacing_ghz,
            cfg.grid.symbol_rate_gbaud,
            cfg.grid.roll_off,
        )?;

        let alpha = match (&cfg.fiber.alpha_db_km, &cfg.fiber.alpha_file) {
            (Some(_), Some(_)) => {
                return Err(Error::Config(
                    "specify either fiber.alpha_db_km or fiber.alpha_file, not both".into(),
                ))
            }
            (Some(v), None) => v.to_freq_table("fiber.alpha_db_km")?,
            (None, Some(f)) => FreqTable::new(read_two_column_file(&base_dir.join(f))?)
                .map_err(|e| Error::Config(format!("fiber.alpha_file: {e}")))?,
            (None, None) => {
                return Err(Error::Config("fiber.alpha_db_km is required".into()))
            }
        };
        let gamma = match (&cfg.fiber.gamma_1_w_km, &cfg.fiber.gamma_file) {
            (Some(_), Some(_)) => {
                return Err(Error::Config(
                    "specify either fiber.gamma_1_w_km or fiber.gamma_file, not both".into(),
                ))
            }
            (Some(v), None) => v.to_freq_table("fiber.gamma_1_w_km")?,
            (None, Some(f)) => FreqTable::new(read_two_column_file(&base_dir.join(f))?)
                .map_err(|e| Error::Config(format!("fiber.gamma_file: {e}")))?,
            (None, None) => {
                return Err(Error::Config("fiber.gamma_1_w_km is required".into()))
            }
        };

        let raman_gain = match cfg.fiber.raman.shape.as_str() {
            "triangular" => RamanGain::Triangular {
                slope_1_w_km_thz: cfg.fiber.raman.slope_1_w_km_thz.ok_or_else(|| {
                    Error::Config("fiber.raman.slope_1_w_km_thz is required".into())
                })?,
                cutoff_thz: cfg
                    .fiber
                    .raman
                    .cutoff_thz
                    .ok_or_else(|| Error::Config("fiber.raman.cutoff_thz is required".into()))?,
            },
            "table" => {
                let points = match (&cfg.fiber.raman.points, &cfg.fiber.raman.points_file) {
                    (Some(_), Some(_)) => {
                        return Err(Error::Config(
                            "specify either raman.points or raman.points_file, not both".into(),
                        ))
                    }
                    (Some(p), None) => p.clone(),
                    (None, Some(f)) => read_two_column_file(&base_dir.join(f))?,
                    (None, None) => {
                        return Err(Error::Config("fiber.raman.points is required".into()))
                    }
                };
                RamanGain::Tabulated { points }
            }
            other => {
                return Err(Error::Config(format!(
                    "fiber.raman.shape must be \"triangular\" or \"table\", got `{other}`"
                )))
            }
        };

        let span = FiberSpan {
            length_km: cfg.fiber.length_km,
            alpha_db_km: alpha,
            d_ref_ps_nm_km: cfg.fiber.dispersion_ps_nm_km,
            s_ref_ps_nm2_km: cfg.fiber.dispersion_slope_ps_nm2_km,
            lambda_ref_nm: cfg.fiber.lambda_ref_nm,
            gamma_1_w_km: gamma,
            raman: RamanGainSpec {
                gain: raman_gain,
                photon_flux_correction: cfg.fiber.raman.photon_flux_correction,
            },
        };
        if cfg.link.span_count == 0 {
            return Err(Error::Config("link.span_count must be at least 1".into()));
        }
        let amp = AmplifierSpec {
            nf_db: cfg.amplifier.nf_db.clone(),
        };
        let link = LinkSpec {
            plan,
            grid,
            spans: vec![span; cfg.link.span_count],
            amps: vec![amp; cfg.link.span_count],
            isrs_enabled: cfg.link.isrs,
            noise_bandwidth_ghz: cfg.link.noise_bandwidth_ghz.unwrap(),
        };
        link.validate()?;

        let launch = match cfg.launch.shape.as_str() {
            "flat" => LaunchSpectrum::flat_dbm(
                &link.plan,
                cfg.launch
                    .power_dbm
                    .ok_or_else(|| Error::Config("launch.power_dbm is required".into()))?,
            ),
            "cubic" => LaunchSpectrum::PerBandCubic {
                coeffs_dbm: cfg
                    .launch
                    .coeffs_dbm
                    .clone()
                    .ok_or_else(|| Error::Config("launch.coeffs_dbm is required".into()))?,
            },
            "explicit" => {
                let dbm = cfg
                    .launch
                    .powers_dbm
                    .clone()
                    .ok_or_else(|| Error::Config("launch.powers_dbm is required".into()))?;
                LaunchSpectrum::Explicit {
                    powers_w: dbm.iter().map(|d| crate::constants::dbm_to_w(*d)).collect(),
                }
            }
            other => {
                return Err(Error::Config(format!(
                    "launch.shape must be \"flat\", \"cubic\" or \"explicit\", got `{other}`"
                )))
            }
        };
        // Launch must evaluate cleanly on this grid.
        crate::spectrum::eval_launch(&launch, &link.grid)?;

        let curve = match cfg.throughput.curve.as_str() {
            "shannon" => ThroughputCurve::Shannon,
            "transponder" => ThroughputCurve::transponder(cfg.grid.symbol_rate_gbaud),
            "table" => ThroughputCurve::table(
                cfg.throughput
                    .table_points
                    .clone()
                    .ok_or_else(|| Error::Config("throughput.table_points is required".into()))?,
            )?,
            other => {
                return Err(Error::Config(format!(
                    "throughput.curve must be \"shannon\", \"transponder\" or \"table\", got `{other}`"
                )))
            }
        };

        let optimizer = OptimizerOpts {
            restarts: cfg.optimizer.restarts,
            max_evals: cfg.optimizer.max_evals,
            x_tol_db: cfg.optimizer.x_tol_db,
            f_tol_rel: cfg.optimizer.f_tol_rel,
            seed: cfg.optimizer.seed,
            power_min_dbm: cfg.optimizer.power_min_dbm,
            power_max_dbm: cfg.optimizer.power_max_dbm,
        };
        let enforce = EnforceOpts {
            tol_db: cfg.enforce.tol_db,
            max_iters: cfg.enforce.max_iters,
            damping: cfg.enforce.damping,
            power_min_dbm: cfg.optimizer.power_min_dbm,
            power_max_dbm: cfg.optimizer.power_max_dbm,
        };
        if !(cfg.solver.rel_tol > 0.0) || !(cfg.solver.max_step_km > 0.0) {
            return Err(Error::Config("solver tolerances must be positive".into()));
        }
        let solver = StepControl {
            rel_tol: cfg.solver.rel_tol,
            max_step: cfg.solver.max_step_km,
            ..Default::default()
        };

        Ok(Scenario {
            config: cfg,
            link,
            curve,
            launch,
            optimizer,
            enforce,
            solver,
        })
    }
}
