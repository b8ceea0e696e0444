//! Brute-force numerical GN integration on tiny channel counts.
//!
//! This is the test-time ground truth for the closed-form NLI coefficients:
//! a 2-D trapezoidal quadrature of
//!
//! ```text
//! P_NLI(f_t) = B_t·(16/27)·γ²·∬ G(f1)·G(f2)·G(f1+f2−f_t)·|LK(f1,f2)|² df1 df2
//! ```
//!
//! with flat-top channel PSDs and the link kernel
//! `LK = ∫₀^L √(ρ1·ρ2·ρ3/ρ_t)(z)·e^{jΔβ z} dz`, `Δβ = 4π²β₂(f1−f_t)(f2−f_t)`,
//! evaluated segment-by-segment on the stored profile with log-linear ρ
//! interpolation (the phase factor integrates in closed form per segment).
//! Capped at 5 channels: the cost is quadratic per axis and this is not a
//! production path.

use std::collections::HashMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::nli::beta2_at;
use crate::raman::{FiberSpan, PowerProfile};
use crate::spectrum::ChannelGrid;

pub const MAX_ORACLE_CHANNELS: usize = 5;

#[derive(Debug, Clone, Copy)]
pub struct QuadSpec {
    pub points_per_axis: usize,
}

impl Default for QuadSpec {
    fn default() -> Self {
        Self { points_per_axis: 96 }
    }
}

/// Result of the oracle integration. `converged` is false when doubling the
/// quadrature still moves the result by more than 1%.
#[derive(Debug, Clone, Copy)]
pub struct GnIntegral {
    /// Best available value (at doubled resolution), W.
    pub p_nli_w: f64,
    /// Value at the requested resolution, W.
    pub coarse_p_nli_w: f64,
    pub converged: bool,
}

struct IslandKernel {
    /// log-linear amplitude per profile segment
    w0: Vec<f64>,
    g: Vec<f64>,
    z0_m: Vec<f64>,
    h_m: Vec<f64>,
    beta2_si: f64,
    gamma_si: f64,
    psd_product: f64,
}

/// Numerically integrated GN NLI power for one channel over one span.
pub fn gn_integral(
    span: &FiberSpan,
    profile: &PowerProfile,
    grid: &ChannelGrid,
    launch_w: &[f64],
    channel: usize,
    quad: &QuadSpec,
) -> Result<GnIntegral> {
    let n = grid.len();
    if n > MAX_ORACLE_CHANNELS {
        return Err(Error::OracleTooManyChannels {
            max: MAX_ORACLE_CHANNELS,
            got: n,
        });
    }
    if channel >= n || launch_w.len() != n {
        return Err(Error::InvalidLaunch("bad channel index or launch length".into()));
    }
    if quad.points_per_axis < 4 {
        return Err(Error::InvalidLaunch("points_per_axis must be at least 4".into()));
    }

    let coarse = integrate_once(span, profile, grid, launch_w, channel, quad.points_per_axis)?;
    let fine = integrate_once(
        span,
        profile,
        grid,
        launch_w,
        channel,
        quad.points_per_axis * 2,
    )?;
    let converged = if fine == 0.0 {
        coarse == 0.0
    } else {
        ((coarse - fine) / fine).abs() <= 0.01
    };
    Ok(GnIntegral {
        p_nli_w: fine,
        coarse_p_nli_w: coarse,
        converged,
    })
}

fn integrate_once(
    span: &FiberSpan,
    profile: &PowerProfile,
    grid: &ChannelGrid,
    launch_w: &[f64],
    target: usize,
    points: usize,
) -> Result<f64> {
    let n = grid.len();
    let f_hz: Vec<f64> = grid
        .channels()
        .iter()
        .map(|c| c.f_center_thz * 1e12)
        .collect();
    // PSD support width: the symbol rate, matching the closed form's
    // bandwidth convention.
    let bw_hz: Vec<f64> = grid
        .channels()
        .iter()
        .map(|c| c.symbol_rate_gbaud * 1e9)
        .collect();
    let f_t = f_hz[target];

    let mut kernels: HashMap<(usize, usize, usize), IslandKernel> = HashMap::new();
    let mut total = 0.0;

    for a in 0..n {
        for b in 0..n {
            let h1 = bw_hz[a] / (points - 1) as f64;
            let h2 = bw_hz[b] / (points - 1) as f64;
            for i1 in 0..points {
                let f1 = f_hz[a] - bw_hz[a] / 2.0 + i1 as f64 * h1;
                let w1 = if i1 == 0 || i1 == points - 1 { 0.5 } else { 1.0 };
                for i2 in 0..points {
                    let f2 = f_hz[b] - bw_hz[b] / 2.0 + i2 as f64 * h2;
                    let f3 = f1 + f2 - f_t;
                    let Some(c) = (0..n).find(|&c| (f3 - f_hz[c]).abs() <= bw_hz[c] / 2.0)
                    else {
                        continue;
                    };
                    let w2 = if i2 == 0 || i2 == points - 1 { 0.5 } else { 1.0 };
                    let kern = island_kernel(
                        &mut kernels,
                        (a, b, c),
                        span,
                        profile,
                        grid,
                        launch_w,
                        target,
                    );
                    let dbeta = 4.0
                        * std::f64::consts::PI
                        * std::f64::consts::PI
                        * kern.beta2_si
                        * (f1 - f_t)
                        * (f2 - f_t);
                    let lk = link_kernel(kern, dbeta);
                    total += w1 * w2 * h1 * h2
                        * kern.psd_product
                        * (16.0 / 27.0)
                        * kern.gamma_si
                        * kern.gamma_si
                        * lk.norm_sqr();
                }
            }
        }
    }

    Ok(total * bw_hz[target])
}

#[allow(clippy::too_many_arguments)]
fn island_kernel<'m>(
    cache: &'m mut HashMap<(usize, usize, usize), IslandKernel>,
    key: (usize, usize, usize),
    span: &FiberSpan,
    profile: &PowerProfile,
    grid: &ChannelGrid,
    launch_w: &[f64],
    target: usize,
) -> &'m IslandKernel {
    cache.entry(key).or_insert_with(|| {
        let (a, b, c) = key;
        let z = profile.z_km();
        let rho = |k: usize, ch: usize| profile.power_at(k, ch) / profile.power_at(0, ch);
        let amp: Vec<f64> = (0..z.len())
            .map(|k| (rho(k, a) * rho(k, b) * rho(k, c) / rho(k, target)).sqrt())
            .collect();
        let mut w0 = Vec::with_capacity(z.len() - 1);
        let mut g = Vec::with_capacity(z.len() - 1);
        let mut z0_m = Vec::with_capacity(z.len() - 1);
        let mut h_m = Vec::with_capacity(z.len() - 1);
        for k in 0..z.len() - 1 {
            let h = (z[k + 1] - z[k]) * 1e3;
            if h <= 0.0 {
                continue;
            }
            w0.push(amp[k]);
            g.push((amp[k + 1] / amp[k]).ln() / h);
            z0_m.push(z[k] * 1e3);
            h_m.push(h);
        }
        let fc = |ch: usize| grid.channels()[ch].f_center_thz;
        let f_mean = (fc(a) + fc(b) + fc(c)) / 3.0;
        let beta2_si = beta2_at(span, f_mean) * 1e-27;
        let gamma_si = span.gamma_1_w_km.at(f_mean) / 1e3;
        let psd = |ch: usize| launch_w[ch] / (grid.channels()[ch].symbol_rate_gbaud * 1e9);
        IslandKernel {
            w0,
            g,
            z0_m,
            h_m,
            beta2_si,
            gamma_si,
            psd_product: psd(a) * psd(b) * psd(c),
        }
    })
}

/// `∫ W(z)·e^{jΔβz} dz` with W log-linear per segment; each segment
/// integrates in closed form.
fn link_kernel(kern: &IslandKernel, dbeta: f64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..kern.w0.len() {
        let w = Complex64::new(kern.g[k], dbeta);
        let h = kern.h_m[k];
        let phase = Complex64::new(0.0, dbeta * kern.z0_m[k]).exp();
        let wh = w * h;
        let seg = if wh.norm_sqr() < 1e-12 {
            // series for (e^{wh} − 1)/w as wh → 0
            h * (Complex64::new(1.0, 0.0) + wh / 2.0 + wh * wh / 6.0)
        } else {
            (wh.exp() - 1.0) / w
        };
        acc += kern.w0[k] * phase * seg;
    }
    acc
}
