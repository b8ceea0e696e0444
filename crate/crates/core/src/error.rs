//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid band plan: {0}")]
    InvalidBandPlan(String),

    #[error("band `{band}` is narrower than one channel ({needed_ghz:.3} GHz needed, {width_ghz:.3} GHz available)")]
    BandTooNarrow {
        band: String,
        needed_ghz: f64,
        width_ghz: f64,
    },

    #[error("invalid channel grid: {0}")]
    InvalidGrid(String),

    #[error("no launch coefficients for band `{0}`")]
    MissingBandCoefficients(String),

    #[error("invalid launch spectrum: {0}")]
    InvalidLaunch(String),

    #[error("step size underflow at z = {z_km:.6} km (stiff blow-up)")]
    StepSizeUnderflow { z_km: f64 },

    #[error("non-positive power for channel {channel} at z = {z_km:.6} km")]
    NonPositivePower { channel: usize, z_km: f64 },

    #[error("closed-form profile requires a triangular Raman gain spec")]
    NonTriangularRaman,

    #[error("channels {i} and {j} overlap spectrally (Δf = {df_ghz:.3} GHz is within half a bandwidth)")]
    OverlappingChannels { i: usize, j: usize, df_ghz: f64 },

    #[error("zero dispersion at {f_thz:.4} THz; use a nonzero local dispersion")]
    ZeroDispersion { f_thz: f64 },

    #[error("NLI oracle supports at most {max} channels, got {got}")]
    OracleTooManyChannels { max: usize, got: usize },

    #[error("zero denominator in GSNR (p_ase + p_nli = 0)")]
    ZeroGsnrDenominator,

    #[error("invalid throughput curve: {0}")]
    InvalidCurve(String),

    #[error("invalid link: {0}")]
    InvalidLink(String),

    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<Error>,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Wrap an error with span/channel context so pipeline failures report
    /// where they happened.
    pub fn with_context(self, context: impl Into<String>) -> Self {
        Error::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }
}
