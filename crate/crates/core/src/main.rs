//! Scenario runner: `multiband --mode <mode> --config <file> [--out-dir DIR]
//! [--set key=value]... [--seed N]`.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use multiband::config::{self, Scenario};
use multiband::constants::{dbm_to_w, w_to_dbm};
use multiband::error::Error;
use multiband::optimizer::{self, OptimizationResult};
use multiband::oracle::{gn_integral, QuadSpec};
use multiband::report::{self, RunSummary, SpectrumEcho, SweepPoint};
use multiband::spectrum::LaunchSpectrum;

const EXIT_CONFIG: u8 = 2;
const EXIT_NOT_CONVERGED: u8 = 3;

#[derive(Debug, Clone, Copy, PartialEq, ValueEnum)]
enum Mode {
    /// Evaluate the configured launch spectrum.
    Simulate,
    /// Maximize total throughput over the per-band cubic coefficients.
    Optimize,
    /// Drive every channel to P_NLI = P_ASE/2.
    Enforce3db,
    /// Evaluate a range of flat launch powers.
    Sweep,
    #[value(hide = true)]
    Oracle,
}

#[derive(Parser, Debug)]
#[command(
    name = "multiband",
    version,
    about = "Multiband WDM launch-power simulator and optimizer"
)]
struct Cli {
    #[arg(long, value_enum)]
    mode: Mode,

    /// Scenario config file (TOML).
    #[arg(long)]
    config: PathBuf,

    /// Output directory for channels.csv / summary.json / plot.tsv.
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,

    /// Config override, e.g. --set link.isrs=off (repeatable).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,

    /// Overrides optimizer.seed from the config.
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    let scenario = match load_scenario(&cli) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("multiband: config error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };

    match run(&cli, &scenario) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("multiband: {e}");
            ExitCode::FAILURE
        }
    }
}

fn load_scenario(cli: &Cli) -> multiband::Result<Scenario> {
    let mut raw = config::load_raw(&cli.config)?;
    for kv in &cli.set {
        let (key, value) = kv
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("override `{kv}` is not KEY=VALUE")))?;
        config::apply_override(&mut raw, key, value)?;
    }
    if let Some(seed) = cli.seed {
        config::apply_override(&mut raw, "optimizer.seed", &seed.to_string())?;
    }
    let cfg = config::config_from_value(raw)?;
    let base_dir = cli.config.parent().unwrap_or(Path::new("."));
    cfg.build(base_dir)
}

fn run(cli: &Cli, scenario: &Scenario) -> multiband::Result<ExitCode> {
    match cli.mode {
        Mode::Simulate => {
            let (reports, total) = optimizer::evaluate_with(
                &scenario.link,
                &scenario.launch,
                &scenario.curve,
                &scenario.solver,
            )?;
            let mut summary =
                RunSummary::new("simulate", &reports, total, scenario.config.clone());
            summary.spectrum = Some(SpectrumEcho::from(&scenario.launch));
            write_outputs(cli, scenario, &reports, &summary)?;
            println!(
                "simulate: {} channels, total {:.3} Tb/s, GSNR {:.2}..{:.2} dB",
                reports.len(),
                total,
                summary.gsnr_min_db,
                summary.gsnr_max_db
            );
            Ok(ExitCode::SUCCESS)
        }
        Mode::Optimize => {
            let out = optimizer::optimize_throughput(
                &scenario.link,
                &scenario.curve,
                &scenario.optimizer,
                &scenario.solver,
            )?;
            let summary = optimization_summary("optimize", scenario, &out);
            write_outputs(cli, scenario, &out.reports, &summary)?;
            println!(
                "optimize: total {:.3} Tb/s after {} evaluations (converged: {})",
                out.best_total_tbps, out.iterations, out.converged
            );
            Ok(ExitCode::SUCCESS)
        }
        Mode::Enforce3db => {
            let out = optimizer::enforce_3db(
                &scenario.link,
                &scenario.curve,
                &scenario.enforce,
                &scenario.solver,
            )?;
            let summary = optimization_summary("enforce3db", scenario, &out);
            write_outputs(cli, scenario, &out.reports, &summary)?;
            println!(
                "enforce3db: total {:.3} Tb/s, residual {:.4} dB after {} iterations",
                out.best_total_tbps,
                out.residual_db.unwrap_or(f64::NAN),
                out.iterations
            );
            if !out.converged {
                eprintln!(
                    "multiband: 3-dB rule not converged (residual {:.4} dB > {:.4} dB)",
                    out.residual_db.unwrap_or(f64::NAN),
                    scenario.enforce.tol_db
                );
                return Ok(ExitCode::from(EXIT_NOT_CONVERGED));
            }
            Ok(ExitCode::SUCCESS)
        }
        Mode::Sweep => {
            let sweep = &scenario.config.sweep;
            if !(sweep.step_db > 0.0) || sweep.stop_dbm < sweep.start_dbm {
                return Err(Error::Config("bad sweep range".into()));
            }
            let n_points =
                ((sweep.stop_dbm - sweep.start_dbm) / sweep.step_db).round() as usize + 1;
            let n_ch = scenario.link.grid.len();
            let mut points = Vec::with_capacity(n_points);
            let mut best: Option<(f64, Vec<multiband::ChannelReport>, f64)> = None;
            for k in 0..n_points {
                let dbm = sweep.start_dbm + k as f64 * sweep.step_db;
                let spec = LaunchSpectrum::Explicit {
                    powers_w: vec![dbm_to_w(dbm); n_ch],
                };
                let (reports, total) = optimizer::evaluate_with(
                    &scenario.link,
                    &spec,
                    &scenario.curve,
                    &scenario.solver,
                )?;
                points.push(SweepPoint {
                    power_dbm: dbm,
                    total_tbps: total,
                });
                if best.as_ref().map_or(true, |(t, _, _)| total > *t) {
                    best = Some((total, reports, dbm));
                }
            }
            let (best_total, best_reports, best_dbm) = best.unwrap();
            let mut summary =
                RunSummary::new("sweep", &best_reports, best_total, scenario.config.clone());
            summary.sweep = Some(points);
            write_outputs(cli, scenario, &best_reports, &summary)?;
            // sweep.csv holds the totals curve.
            let mut csv = String::from("# multiband sweep v1\npower_dbm,total_tbps\n");
            for p in summary.sweep.as_ref().unwrap() {
                csv.push_str(&format!("{:.6},{:.6}\n", p.power_dbm, p.total_tbps));
            }
            report::write_file(&cli.out_dir.join("sweep.csv"), &csv)?;
            println!(
                "sweep: best {:.3} Tb/s at {:.2} dBm over {} points",
                best_total,
                best_dbm,
                summary.sweep.as_ref().unwrap().len()
            );
            Ok(ExitCode::SUCCESS)
        }
        Mode::Oracle => {
            // Debugging aid: numerically integrated GN NLI vs. the closed
            // form, on the configured (tiny) grid.
            let launch = multiband::eval_launch(&scenario.launch, &scenario.link.grid)?;
            let profiles = multiband::noise::span_profiles(
                &scenario.link,
                &launch,
                &scenario.solver,
            )?;
            let etas = multiband::nli::compute_eta(&scenario.link, &profiles)?;
            let nli = multiband::nli::nli_power(&launch, &etas);
            let ch = scenario.config.oracle.channel;
            let quad = QuadSpec {
                points_per_axis: scenario.config.oracle.points_per_axis,
            };
            let r = gn_integral(
                &scenario.link.spans[0],
                &profiles[0],
                &scenario.link.grid,
                &launch,
                ch,
                &quad,
            )?;
            let per_span_cf = nli[ch] / scenario.link.spans.len() as f64;
            println!(
                "{{\"channel\": {}, \"oracle_w\": {:e}, \"oracle_dbm\": {:.4}, \"closed_form_w\": {:e}, \"closed_form_dbm\": {:.4}, \"delta_db\": {:.4}, \"converged\": {}}}",
                ch,
                r.p_nli_w,
                w_to_dbm(r.p_nli_w),
                per_span_cf,
                w_to_dbm(per_span_cf),
                10.0 * (per_span_cf / r.p_nli_w).log10(),
                r.converged
            );
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn optimization_summary(mode: &str, scenario: &Scenario, out: &OptimizationResult) -> RunSummary {
    let mut summary = RunSummary::new(mode, &out.reports, out.best_total_tbps, scenario.config.clone());
    summary.converged = Some(out.converged);
    summary.iterations = Some(out.iterations);
    summary.restarts_used = Some(out.restarts_used);
    summary.residual_db = out.residual_db;
    summary.spectrum = Some(SpectrumEcho::from(&out.best_spectrum));
    summary
}

fn write_outputs(
    cli: &Cli,
    scenario: &Scenario,
    reports: &[multiband::ChannelReport],
    summary: &RunSummary,
) -> multiband::Result<()> {
    std::fs::create_dir_all(&cli.out_dir)?;
    if scenario.config.output.csv {
        report::write_file(&cli.out_dir.join("channels.csv"), &report::channel_csv(reports))?;
    }
    report::write_file(&cli.out_dir.join("summary.json"), &summary.to_json())?;
    if scenario.config.output.plot_data {
        report::write_file(&cli.out_dir.join("plot.tsv"), &report::plot_tsv(reports))?;
    }
    Ok(())
}
