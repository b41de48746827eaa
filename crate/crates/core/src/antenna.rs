//! Vertical antenna patterns.
//!
//! Base stations radiate a downtilted main lobe over a constant side-lobe
//! floor; horizontally the pattern is omnidirectional, so lobe membership
//! depends only on the height difference and horizontal range. The UAV
//! receiver is either omnidirectional or a downward cone with an
//! aperture-style beam gain.

use crate::error::{Result, SimError};
use crate::scenario::Position3D;

/// Base-station vertical pattern.
#[derive(Debug, Clone, Copy)]
pub struct BsAntenna {
    /// Vertical beamwidth in degrees.
    pub beamwidth_deg: f64,
    /// Downtilt below horizontal in degrees.
    pub downtilt_deg: f64,
    /// Main-lobe gain (linear).
    pub main_gain: f64,
    /// Side-lobe gain (linear).
    pub side_gain: f64,
}

impl Default for BsAntenna {
    fn default() -> Self {
        Self {
            beamwidth_deg: 30.0,
            downtilt_deg: 8.0,
            main_gain: 10.0,
            side_gain: 0.5,
        }
    }
}

impl BsAntenna {
    pub fn validate(&self) -> Result<()> {
        if !(self.beamwidth_deg > 0.0 && self.beamwidth_deg < 180.0) {
            return Err(SimError::InvalidConfig(format!(
                "BS beamwidth must lie in (0, 180) degrees, got {}",
                self.beamwidth_deg
            )));
        }
        if !(self.side_gain > 0.0 && self.main_gain > self.side_gain) {
            return Err(SimError::InvalidConfig(format!(
                "lobe gains must satisfy main > side > 0, got main {} side {}",
                self.main_gain, self.side_gain
            )));
        }
        Ok(())
    }

    /// Same pattern with the side lobe set `ratio` times below the main lobe.
    pub fn with_main_to_side_ratio(&self, ratio: f64) -> Result<BsAntenna> {
        if !(ratio > 1.0) {
            return Err(SimError::InvalidConfig(format!(
                "main-to-side ratio must exceed 1, got {ratio}"
            )));
        }
        Ok(BsAntenna {
            side_gain: self.main_gain / ratio,
            ..*self
        })
    }
}

/// UAV receive-pattern mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UavAntennaMode {
    /// Constant gain in every direction.
    #[default]
    Omni,
    /// Beam gain inside a downward cone, `back_gain` elsewhere.
    DirectionalDown,
}

/// UAV receive pattern.
#[derive(Debug, Clone, Copy)]
pub struct UavAntenna {
    pub mode: UavAntennaMode,
    /// Cone beamwidth in degrees.
    pub beamwidth_deg: f64,
    /// Gain outside the cone (linear).
    pub back_gain: f64,
}

impl Default for UavAntenna {
    fn default() -> Self {
        Self {
            mode: UavAntennaMode::Omni,
            beamwidth_deg: 180.0,
            back_gain: 0.0,
        }
    }
}

impl UavAntenna {
    pub fn omni() -> Self {
        Self::default()
    }

    pub fn directional_down(beamwidth_deg: f64, back_gain: f64) -> Self {
        Self {
            mode: UavAntennaMode::DirectionalDown,
            beamwidth_deg,
            back_gain,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beamwidth_deg > 0.0 && self.beamwidth_deg <= 180.0) {
            return Err(SimError::InvalidConfig(format!(
                "UAV beamwidth must lie in (0, 180] degrees, got {}",
                self.beamwidth_deg
            )));
        }
        if !(self.back_gain >= 0.0) {
            return Err(SimError::InvalidConfig(format!(
                "UAV back gain must be non-negative, got {}",
                self.back_gain
            )));
        }
        Ok(())
    }
}

/// Which lobe of the station pattern serves a link.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LobeTag {
    MainLobe,
    SideLobe,
}

impl LobeTag {
    pub fn label(&self) -> &'static str {
        match self {
            LobeTag::MainLobe => "main",
            LobeTag::SideLobe => "side",
        }
    }
}

/// Aperture-style beam gain for a beamwidth given in degrees.
pub fn beam_gain(beamwidth_deg: f64) -> f64 {
    29_000.0 / (beamwidth_deg * beamwidth_deg)
}

/// Height interval served by the main lobe at horizontal range `r`.
///
/// The bounds follow the two beam edges, tilted down from the mast top;
/// at `r = 0` the interval collapses to the mast height and nothing is
/// inside it.
pub fn main_lobe_height_window(ant: &BsAntenna, h_bs: f64, r: f64) -> (f64, f64) {
    let half = ant.beamwidth_deg / 2.0;
    let lower = h_bs - r * (ant.downtilt_deg + half).to_radians().tan();
    let upper = h_bs - r * (ant.downtilt_deg - half).to_radians().tan();
    (lower, upper)
}

/// Transmit gain toward the UAV and the lobe that produces it.
///
/// Main lobe applies iff the UAV height lies strictly inside
/// [`main_lobe_height_window`]; boundary contact counts as side lobe.
pub fn bs_tx_gain(
    ant: &BsAntenna,
    bs: &Position3D,
    uav: &Position3D,
) -> Result<(f64, LobeTag)> {
    if bs.distance_3d(uav) == 0.0 {
        return Err(SimError::CoincidentEndpoints);
    }
    let r = bs.horizontal_distance(uav);
    let (lower, upper) = main_lobe_height_window(ant, bs.h, r);
    if uav.h > lower && uav.h < upper {
        Ok((ant.main_gain, LobeTag::MainLobe))
    } else {
        Ok((ant.side_gain, LobeTag::SideLobe))
    }
}

/// Receive gain of the UAV antenna toward a station.
///
/// In directional mode the station must sit strictly below the UAV and
/// within the downward cone of half the beamwidth; otherwise the back
/// gain applies. The cone cannot see anything when the station is at or
/// above the UAV height.
pub fn uav_rx_gain(ant: &UavAntenna, uav: &Position3D, bs: &Position3D) -> Result<f64> {
    if uav.distance_3d(bs) == 0.0 {
        return Err(SimError::CoincidentEndpoints);
    }
    match ant.mode {
        UavAntennaMode::Omni => Ok(beam_gain(180.0)),
        UavAntennaMode::DirectionalDown => {
            let drop = uav.h - bs.h;
            let r = uav.horizontal_distance(bs);
            let footprint = drop * (ant.beamwidth_deg / 2.0).to_radians().tan();
            if drop > 0.0 && r <= footprint {
                Ok(beam_gain(ant.beamwidth_deg))
            } else {
                Ok(ant.back_gain)
            }
        }
    }
}
