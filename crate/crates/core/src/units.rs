//! Decibel/linear conversions.
//!
//! All model code works in SI linear units (meters, watts, Hz); dB-valued
//! inputs are converted exactly once at the configuration boundary.

/// Converts a dB ratio to a linear ratio.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Converts a linear ratio to dB. Non-positive input yields -inf or NaN.
pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// Converts a power in dBW to watts.
pub fn dbw_to_watts(dbw: f64) -> f64 {
    db_to_linear(dbw)
}

/// Converts a power in dBm to watts.
pub fn dbm_to_watts(dbm: f64) -> f64 {
    db_to_linear(dbm - 30.0)
}
