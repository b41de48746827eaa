//! Scenario geometry, per-node configuration, and reproducible deployment.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::airchannel::{ChannelMode, EnvParams};
use crate::antenna::{BsAntenna, UavAntenna};
use crate::error::{Result, SimError};
use crate::link::ClosestMetric;
use crate::units::dbm_to_watts;

/// A point in the simulation volume; `h` is the height above ground.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Position3D {
    pub x: f64,
    pub y: f64,
    pub h: f64,
}

impl Position3D {
    pub fn new(x: f64, y: f64, h: f64) -> Self {
        Self { x, y, h }
    }

    /// Distance between the ground projections of the two points.
    pub fn horizontal_distance(&self, other: &Position3D) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        (dx * dx + dy * dy).sqrt()
    }

    /// Euclidean distance in three dimensions.
    pub fn distance_3d(&self, other: &Position3D) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        let dh = self.h - other.h;
        (dx * dx + dy * dy + dh * dh).sqrt()
    }
}

/// Rectangular deployment region with its south-west corner at the origin.
#[derive(Debug, Clone, Copy)]
pub struct RegionSpec {
    pub width: f64,
    pub depth: f64,
}

impl RegionSpec {
    pub fn new(width: f64, depth: f64) -> Self {
        Self { width, depth }
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        (0.0..=self.width).contains(&x) && (0.0..=self.depth).contains(&y)
    }

    pub fn center(&self) -> (f64, f64) {
        (self.width / 2.0, self.depth / 2.0)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.width > 0.0 && self.depth > 0.0) {
            return Err(SimError::InvalidConfig(format!(
                "region must have positive extent, got {} x {}",
                self.width, self.depth
            )));
        }
        Ok(())
    }
}

/// One base station: mast position, transmit power, and antenna pattern.
#[derive(Debug, Clone)]
pub struct BsSite {
    pub position: Position3D,
    pub tx_power: f64,
    pub antenna: BsAntenna,
}

/// Handle for one reproducible random stream.
///
/// The same `(seed, stream_id)` pair always yields the same draw sequence,
/// and distinct stream ids are statistically independent, so Monte Carlo
/// drops can be evaluated in any order without changing results.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngStream {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    /// Instantiates the generator positioned at the start of this stream.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }
}

/// How base stations are laid out over the region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BsLayout {
    /// I.i.d. uniform positions, redrawn per Monte Carlo drop.
    #[default]
    Uniform,
    /// Fixed near-square grid of cell centers, for reproducible worked examples.
    Grid,
}

/// Which base stations contribute interference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FrequencyReuse {
    /// All non-serving stations share the carrier and interfere.
    #[default]
    Full,
    /// Non-serving stations are silent on the carrier; noise-limited links.
    Coordinated,
}

/// Full parameter bundle for the multi-station scenario.
#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    pub region: RegionSpec,
    pub bs_count: usize,
    pub bs_height: f64,
    /// Per-station transmit power in watts.
    pub bs_tx_power: f64,
    pub env: EnvParams,
    pub bs_antenna: BsAntenna,
    pub uav_antenna: UavAntenna,
    /// UAV ground-plane position; defaults to the region center.
    pub uav_xy: (f64, f64),
    /// UAV height used when a sweep does not override it.
    pub uav_height: f64,
    /// Receiver noise power in watts over the operating bandwidth.
    pub noise_power: f64,
    pub seed: u64,
    pub channel_mode: ChannelMode,
    pub bs_layout: BsLayout,
    pub closest_metric: ClosestMetric,
    pub frequency_reuse: FrequencyReuse,
}

impl Default for ScenarioConfig {
    /// Ten stations over a 1 km square, 0.251 W (-6 dBW) each, 30 m masts,
    /// suburban environment, omnidirectional UAV antenna, -114 dBm noise.
    fn default() -> Self {
        let region = RegionSpec::new(1000.0, 1000.0);
        let uav_xy = region.center();
        Self {
            region,
            bs_count: 10,
            bs_height: 30.0,
            bs_tx_power: crate::units::dbw_to_watts(-6.0),
            env: EnvParams::default(),
            bs_antenna: BsAntenna::default(),
            uav_antenna: UavAntenna::default(),
            uav_xy,
            uav_height: 100.0,
            noise_power: dbm_to_watts(-114.0),
            seed: 42,
            channel_mode: ChannelMode::Expected,
            bs_layout: BsLayout::Uniform,
            closest_metric: ClosestMetric::ThreeDim,
            frequency_reuse: FrequencyReuse::Full,
        }
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        self.region.validate()?;
        self.env.validate()?;
        self.bs_antenna.validate()?;
        self.uav_antenna.validate()?;
        if self.bs_count < 1 {
            return Err(SimError::InvalidConfig("bs_count must be at least 1".into()));
        }
        if !(self.bs_tx_power > 0.0) {
            return Err(SimError::InvalidConfig(format!(
                "bs_tx_power must be positive, got {}",
                self.bs_tx_power
            )));
        }
        if !(self.noise_power > 0.0) {
            return Err(SimError::InvalidConfig(format!(
                "noise_power must be positive, got {}",
                self.noise_power
            )));
        }
        if !(self.bs_height >= 0.0) {
            return Err(SimError::InvalidConfig(format!(
                "bs_height must be non-negative, got {}",
                self.bs_height
            )));
        }
        if !(self.uav_height >= 0.0) {
            return Err(SimError::InvalidConfig(format!(
                "uav_height must be non-negative, got {}",
                self.uav_height
            )));
        }
        if !self.region.contains(self.uav_xy.0, self.uav_xy.1) {
            return Err(SimError::InvalidConfig(format!(
                "uav_xy ({}, {}) lies outside the region",
                self.uav_xy.0, self.uav_xy.1
            )));
        }
        Ok(())
    }

    /// UAV position at the configured ground-plane point and the given height.
    pub fn uav_position(&self, height: f64) -> Position3D {
        Position3D::new(self.uav_xy.0, self.uav_xy.1, height)
    }

    /// Station deployment for one drop, drawing from the supplied generator.
    pub fn bs_sites_with(&self, rng: &mut impl Rng) -> Result<Vec<BsSite>> {
        let positions = match self.bs_layout {
            BsLayout::Uniform => {
                deploy_bs_uniform_with(&self.region, self.bs_count, self.bs_height, rng)?
            }
            BsLayout::Grid => deploy_bs_grid(&self.region, self.bs_count, self.bs_height)?,
        };
        Ok(positions
            .into_iter()
            .map(|position| BsSite {
                position,
                tx_power: self.bs_tx_power,
                antenna: self.bs_antenna,
            })
            .collect())
    }

    /// Station deployment for one drop, addressed by stream.
    pub fn bs_sites(&self, stream: RngStream) -> Result<Vec<BsSite>> {
        self.bs_sites_with(&mut stream.rng())
    }
}

/// `n` positions i.i.d. uniform over the region at the given height.
pub fn deploy_bs_uniform(
    region: &RegionSpec,
    n: usize,
    height: f64,
    stream: &RngStream,
) -> Result<Vec<Position3D>> {
    deploy_bs_uniform_with(region, n, height, &mut stream.rng())
}

/// As [`deploy_bs_uniform`], but drawing from an already-positioned generator
/// so deployment and channel draws can share one stream.
pub fn deploy_bs_uniform_with(
    region: &RegionSpec,
    n: usize,
    height: f64,
    rng: &mut impl Rng,
) -> Result<Vec<Position3D>> {
    if n == 0 {
        return Err(SimError::InvalidConfig(
            "deployment needs at least one base station".into(),
        ));
    }
    region.validate()?;
    let mut positions = Vec::with_capacity(n);
    for _ in 0..n {
        let x = rng.gen_range(0.0..region.width);
        let y = rng.gen_range(0.0..region.depth);
        positions.push(Position3D::new(x, y, height));
    }
    Ok(positions)
}

/// Fixed near-square grid of cell centers covering the region.
pub fn deploy_bs_grid(region: &RegionSpec, n: usize, height: f64) -> Result<Vec<Position3D>> {
    if n == 0 {
        return Err(SimError::InvalidConfig(
            "deployment needs at least one base station".into(),
        ));
    }
    region.validate()?;
    let cols = (n as f64).sqrt().ceil() as usize;
    let rows = n.div_ceil(cols);
    let mut positions = Vec::with_capacity(n);
    'outer: for j in 0..rows {
        for i in 0..cols {
            if positions.len() == n {
                break 'outer;
            }
            let x = (i as f64 + 0.5) * region.width / cols as f64;
            let y = (j as f64 + 0.5) * region.depth / rows as f64;
            positions.push(Position3D::new(x, y, height));
        }
    }
    Ok(positions)
}
