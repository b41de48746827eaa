//! Ground-to-UAV large-scale channel.
//!
//! The link is line-of-sight with a geometry-dependent probability and the
//! path gain is the probability-weighted mixture of a LOS and an NLOS
//! power law anchored at a common reference distance. The LOS probability
//! follows the classic built-up-area model: the horizontal span is divided
//! into potential building rows, and each row blocks the ray unless the
//! ray clears a Rayleigh-distributed building height at that point.

use rand::Rng;

use crate::error::{Result, SimError};
use crate::units::db_to_linear;

/// Environment triple plus path-loss constants.
#[derive(Debug, Clone, Copy)]
pub struct EnvParams {
    /// Fraction of land area covered by buildings (dimensionless).
    pub a: f64,
    /// Building density in buildings per square kilometre.
    pub b: f64,
    /// Scale of the building-height distribution in meters.
    pub c: f64,
    /// LOS path gain at the reference distance (linear).
    pub gain_los: f64,
    /// NLOS path gain at the reference distance (linear).
    pub gain_nlos: f64,
    /// LOS path-loss exponent.
    pub alpha_los: f64,
    /// NLOS path-loss exponent.
    pub alpha_nlos: f64,
    /// Reference distance in meters; the power laws are valid beyond it.
    pub ref_distance: f64,
}

impl Default for EnvParams {
    /// Suburban defaults: a = 0.3, b = 500 /km^2, c = 15 m, -32.9 dB LOS and
    /// -41.1 dB NLOS reference gains, exponents 2.09 / 3.75, d0 = 1 m.
    fn default() -> Self {
        Self {
            a: 0.3,
            b: 500.0,
            c: 15.0,
            gain_los: db_to_linear(-32.9),
            gain_nlos: db_to_linear(-41.1),
            alpha_los: 2.09,
            alpha_nlos: 3.75,
            ref_distance: 1.0,
        }
    }
}

impl EnvParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.a > 0.0 && self.a <= 1.0) {
            return Err(SimError::InvalidConfig(format!(
                "environment parameter a must lie in (0, 1], got {}",
                self.a
            )));
        }
        if !(self.b > 0.0) {
            return Err(SimError::InvalidConfig(format!(
                "building density b must be positive, got {}",
                self.b
            )));
        }
        if !(self.c > 0.0) {
            return Err(SimError::InvalidConfig(format!(
                "building height scale c must be positive, got {}",
                self.c
            )));
        }
        if !(self.gain_nlos > 0.0 && self.gain_los > self.gain_nlos && self.gain_los < 1.0) {
            return Err(SimError::InvalidConfig(format!(
                "reference gains must satisfy 0 < nlos < los < 1, got los {} nlos {}",
                self.gain_los, self.gain_nlos
            )));
        }
        if !(self.alpha_los >= 2.0 && self.alpha_nlos >= self.alpha_los) {
            return Err(SimError::InvalidConfig(format!(
                "path-loss exponents must satisfy 2 <= los <= nlos, got {} and {}",
                self.alpha_los, self.alpha_nlos
            )));
        }
        if !(self.ref_distance > 0.0) {
            return Err(SimError::InvalidConfig(format!(
                "reference distance must be positive, got {}",
                self.ref_distance
            )));
        }
        Ok(())
    }
}

/// Channel realization mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ChannelMode {
    /// Use the probability-weighted LOS/NLOS mixture gain.
    #[default]
    Expected,
    /// Draw the LOS state as a Bernoulli trial and use the matching gain.
    Bernoulli,
}

/// Index of the last potential building row crossed by the ground
/// projection of a link of horizontal length `r`; negative when the span
/// is too short to cross any row.
pub fn building_count(r: f64, env: &EnvParams) -> i64 {
    (r * (env.a * env.b).sqrt() / 1000.0 - 1.0).floor() as i64
}

/// Probability that the link between a mast at `h_bs` and a UAV at `h_uav`,
/// separated horizontally by `r`, has line of sight.
///
/// Each building row is cleared independently; the ray height at row `n`
/// interpolates linearly between the endpoint heights. A span crossing no
/// rows is LOS with probability one (empty product).
pub fn los_probability(h_bs: f64, h_uav: f64, r: f64, env: &EnvParams) -> f64 {
    let m = building_count(r, env);
    if m < 0 {
        return 1.0;
    }
    let rows = (m + 1) as f64;
    let two_c_sq = 2.0 * env.c * env.c;
    let mut p = 1.0;
    for n in 0..=m {
        let ray_height = h_bs - (n as f64 + 0.5) * (h_bs - h_uav) / rows;
        p *= 1.0 - (-(ray_height * ray_height) / two_c_sq).exp();
    }
    p
}

/// Probability-weighted mixture of the LOS and NLOS path gains at 3D
/// distance `d`.
pub fn expected_channel_gain(d: f64, p_los: f64, env: &EnvParams) -> Result<f64> {
    if d < env.ref_distance {
        return Err(SimError::DistanceBelowReference {
            distance: d,
            reference: env.ref_distance,
        });
    }
    debug_assert!((0.0..=1.0).contains(&p_los));
    Ok(p_los * env.gain_los * d.powf(-env.alpha_los)
        + (1.0 - p_los) * env.gain_nlos * d.powf(-env.alpha_nlos))
}

/// Draws the LOS state and returns the matching single-path gain.
pub fn sample_channel_gain(
    d: f64,
    p_los: f64,
    env: &EnvParams,
    rng: &mut impl Rng,
) -> Result<f64> {
    if d < env.ref_distance {
        return Err(SimError::DistanceBelowReference {
            distance: d,
            reference: env.ref_distance,
        });
    }
    Ok(if rng.gen_bool(p_los) {
        env.gain_los * d.powf(-env.alpha_los)
    } else {
        env.gain_nlos * d.powf(-env.alpha_nlos)
    })
}
