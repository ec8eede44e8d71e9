//! Fusion engines: the system under test (F) and the standard device (G).
//!
//! Engines only ever see [`Observation`]s, in time order. They have no
//! access to ground truth or to where a report came from.

mod grid_bayes;
pub mod log;
mod staff;

pub use grid_bayes::{GridBayesConfig, GridBayesEngine};
pub use staff::{StaffSurrogate, StaffSurrogateConfig};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{Area, Point};
use crate::metrics::StrengthDistribution;

/// A report as delivered to an engine.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub time_s: f64,
    pub position: Point,
    pub strength: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimatedLocation {
    pub position: Point,
    pub strength: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimateSnapshot {
    pub time_s: f64,
    pub locations: Vec<EstimatedLocation>,
    pub grid: Option<StrengthDistribution>,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FusionError {
    #[error("report at t = {time} arrived after one at t = {last}")]
    OutOfOrder { time: f64, last: f64 },
    #[error("estimate requested for t = {t} before the last ingested report at t = {last}")]
    EstimateInPast { t: f64, last: f64 },
    #[error("posterior mass vanished")]
    ZeroMass,
    #[error("invalid engine config: {0}")]
    Config(String),
}

pub trait FusionEngine: Send {
    fn name(&self) -> &str;

    /// Interval between fresh estimates, in seconds.
    fn update_cadence_s(&self) -> f64;

    /// Reports must arrive in non-decreasing time order.
    fn ingest(&mut self, observation: &Observation) -> Result<(), FusionError>;

    fn estimate(&mut self, t: f64) -> Result<EstimateSnapshot, FusionError>;
}

/// Rejects out-of-order input.
#[derive(Debug, Clone, Default)]
pub(crate) struct StreamClock {
    last: Option<f64>,
}

impl StreamClock {
    pub(crate) fn admit(&mut self, time: f64) -> Result<(), FusionError> {
        match self.last {
            Some(last) if time < last => Err(FusionError::OutOfOrder { time, last }),
            _ => {
                self.last = Some(time);
                Ok(())
            }
        }
    }

    pub(crate) fn check_estimate(&self, t: f64) -> Result<(), FusionError> {
        match self.last {
            Some(last) if t < last => Err(FusionError::EstimateInPast { t, last }),
            _ => Ok(()),
        }
    }
}

/// Engine choice and parameters, as written in campaign configs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EngineSpec {
    GridBayes(GridBayesConfig),
    StaffSurrogate(StaffSurrogateConfig),
}

impl EngineSpec {
    pub fn kind_name(&self) -> &'static str {
        match self {
            EngineSpec::GridBayes(_) => "grid_bayes",
            EngineSpec::StaffSurrogate(_) => "staff_surrogate",
        }
    }

    /// Builds a fresh engine for an area. Engines here are deterministic;
    /// `seed` is accepted so stochastic engines fit the same contract.
    pub fn build(&self, area: Area, seed: u64) -> Result<Box<dyn FusionEngine>, FusionError> {
        let _ = seed;
        Ok(match self {
            EngineSpec::GridBayes(c) => Box::new(GridBayesEngine::new(c.clone(), area)?),
            EngineSpec::StaffSurrogate(c) => Box::new(StaffSurrogate::new(c.clone())?),
        })
    }
}
