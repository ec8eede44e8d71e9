//! Ground truth, deceiver and observer.
//!
//! A run evolves a [`WorldState`] in fixed ticks. Each observation window the
//! deceiver hides some Red entities and injects phantom decoys
//! ([`apply_deception`]); the observer then turns whatever remains visible to
//! Blue into noisy [`Report`]s ([`observe`]).

mod deception;
pub mod log;
mod observe;
mod scenario;
mod world;

pub use deception::{apply_deception, Decoy, DeceivedView};
pub use observe::{initial_intel, observe, Origin, Report};
pub use scenario::{load_scenario, DeceptionPolicy, ObserverModel, Scenario};
pub use world::{apply_attrition, init_world, step_world, Entity, EntityId, Side, WorldState};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScenarioError {
    #[error("config parse error: {0}")]
    Parse(String),
    #[error("invalid value for `{field}`: {reason}")]
    Invalid { field: &'static str, reason: String },
}

#[derive(Debug, Error, PartialEq)]
pub enum WorldError {
    #[error("time step must be positive, got {0}")]
    NonPositiveStep(f64),
    #[error("initial intel requires a state at t = 0, got t = {0}")]
    IntelNotAtStart(f64),
}
