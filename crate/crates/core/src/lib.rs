//! Deterministic, seedable simulation of cellular-network-connected UAV
//! communication links.
//!
//! The crate models the ground-to-UAV radio channel as a height- and
//! distance-dependent mixture of line-of-sight and non-line-of-sight
//! propagation, base-station antennas as a downtilted vertical main lobe
//! over a side-lobe floor, and the UAV receiver as either omnidirectional
//! or a downward cone. On top of the per-link model sit cell-association
//! policies, SINR evaluation with a main-lobe/side-lobe interference
//! decomposition, a two-user superposition-coding rate kernel, and a
//! circular-flight propulsion-energy model used for service-delay and
//! energy-efficiency studies.
//!
//! Everything is deterministic for a fixed seed: each Monte Carlo drop
//! draws from its own `(seed, stream_id)` RNG stream, so aggregates are
//! independent of evaluation order and bit-identical across runs.

pub mod airchannel;
pub mod antenna;
pub mod config;
pub mod error;
pub mod flightenergy;
pub mod link;
pub mod runner;
pub mod scenario;
pub mod units;

pub use error::{Result, SimError};
