//! Physical constants and the unit conversions used throughout the crate.
//!
//! Internally everything is linear: powers in W, gains as ratios. dBm/dB
//! appear only at interfaces (config, CSV, logs).

/// Speed of light in vacuum, m/s.
pub const C_M_S: f64 = 299_792_458.0;

/// Planck constant, J·s.
pub const PLANCK_J_S: f64 = 6.626_070_15e-34;

/// The "3-dB" gap of the launch-power rule, `10·log10(2)` dB.
pub const RULE_GAP_DB: f64 = 3.010_299_956_639_812;

pub fn dbm_to_w(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

pub fn w_to_dbm(w: f64) -> f64 {
    10.0 * w.log10() + 30.0
}

pub fn db_to_lin(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn lin_to_db(lin: f64) -> f64 {
    10.0 * lin.log10()
}

/// Attenuation in dB/km to the exponential coefficient in 1/km.
pub fn alpha_db_to_1_km(db_per_km: f64) -> f64 {
    db_per_km * std::f64::consts::LN_10 / 10.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dbm_round_trip() {
        assert!((dbm_to_w(0.0) - 1.0e-3).abs() < 1e-18);
        assert!((dbm_to_w(5.0) - 3.162_277_660_168e-3).abs() < 1e-12);
        for dbm in [-20.0, -3.5, 0.0, 9.6, 15.0] {
            assert!((w_to_dbm(dbm_to_w(dbm)) - dbm).abs() < 1e-12);
        }
    }

    #[test]
    fn alpha_conversion() {
        // 0.2 dB/km over 100 km is 20 dB, i.e. a factor 0.01.
        let a = alpha_db_to_1_km(0.2);
        assert!(((-a * 100.0).exp() - 0.01).abs() < 1e-12);
    }
}
