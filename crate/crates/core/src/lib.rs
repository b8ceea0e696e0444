//! Simulation and launch-power optimization for multiband coherent WDM
//! links under inter-channel stimulated Raman scattering.
//!
//! The crate models a chain of amplified fiber spans carrying a C+L+S(+E)
//! channel comb. Per span it solves the coupled Raman power-evolution ODE,
//! accumulates amplifier ASE under a re-equalizing gain policy, and computes
//! nonlinear-interference powers with a GN-type closed form whose effective
//! lengths come from the actual (ISRS-tilted) profiles. On top of that
//! pipeline sit two searches: total-throughput maximization over per-band
//! cubic launch spectra, and fixed-point enforcement of the classical
//! "3-dB rule" (`P_NLI = P_ASE/2` per channel).
//!
//! The `multiband` binary runs scenario files; see the repository README.

pub mod config;
pub mod constants;
pub mod error;
pub mod metrics;
pub mod nelder_mead;
pub mod nli;
pub mod noise;
pub mod ode;
pub mod optimizer;
pub mod oracle;
pub mod raman;
pub mod report;
pub mod spectrum;

pub use error::{Error, Result};
pub use metrics::{ChannelReport, ThroughputCurve};
pub use noise::LinkSpec;
pub use optimizer::{
    analytic_opt_power, enforce_3db, evaluate, evaluate_with, optimize_throughput,
    EnforceOpts, OptimizationResult, OptimizerOpts,
};
pub use raman::{FiberSpan, PowerProfile, RamanGain, RamanGainSpec};
pub use spectrum::{build_grid, eval_launch, Band, BandPlan, Channel, ChannelGrid, LaunchSpectrum};
