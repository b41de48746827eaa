//! Error type shared across the simulator.

use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by configuration handling and model evaluation.
#[derive(Debug, Error)]
pub enum SimError {
    /// A value violates a model precondition or invariant.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// Link endpoints coincide, so the antenna geometry is undefined.
    #[error("link endpoints coincide; antenna gain is undefined")]
    CoincidentEndpoints,

    /// The large-scale channel model only holds beyond its reference distance.
    #[error("distance {distance} m is below the reference distance {reference} m")]
    DistanceBelowReference { distance: f64, reference: f64 },

    /// Bernoulli channel mode was requested without a random stream.
    #[error("bernoulli channel mode requires an RNG stream")]
    RngRequired,

    /// Association was asked to choose from an empty candidate list.
    #[error("cannot associate: no link budgets supplied")]
    NoCandidates,

    /// A serving index referred outside the budget list.
    #[error("serving index {index} out of range for {len} budgets")]
    ServingIndexOutOfRange { index: usize, len: usize },

    /// A config file could not be read or parsed.
    #[error("config file {path}: {message}")]
    ConfigFile { path: PathBuf, message: String },

    /// An output file could not be written.
    #[error("writing {path}: {source}")]
    Output {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, SimError>;
