//! Mechanized stand-in for a human staff.
//!
//! The surrogate keeps every reported target at its last reported position
//! and only publishes a new picture on its cadence ticks (multiples of
//! `cadence_s`). Between ticks the last published picture is returned.
//!
//! Merge rule (our own; nothing here is known about how real staffs merged
//! conflicting reports): a report within `merge_radius_m` of a tracked
//! target replaces the nearest such target, otherwise it starts a new one.
//! Targets not reported for longer than `staleness_horizon_s` at a cadence
//! tick are dropped.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::{EstimateSnapshot, EstimatedLocation, FusionEngine, FusionError, Observation, StreamClock};
use crate::geom::Point;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StaffSurrogateConfig {
    pub cadence_s: f64,
    pub staleness_horizon_s: f64,
    /// Reports this close are taken to be the same target. The default
    /// covers one report period of Red travel (90 m) plus about three sigma
    /// of the difference of two noisy reports.
    pub merge_radius_m: f64,
}

impl Default for StaffSurrogateConfig {
    fn default() -> Self {
        Self {
            cadence_s: 900.0,
            staleness_horizon_s: 1800.0,
            merge_radius_m: 200.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
struct Target {
    position: Point,
    strength: u32,
    last_seen: f64,
}

#[derive(Debug, Clone)]
pub struct StaffSurrogate {
    config: StaffSurrogateConfig,
    clock: StreamClock,
    pending: VecDeque<Observation>,
    tracked: Vec<Target>,
    last_refresh: Option<f64>,
    published: Vec<EstimatedLocation>,
}

impl StaffSurrogate {
    pub fn new(config: StaffSurrogateConfig) -> Result<Self, FusionError> {
        if !(config.cadence_s > 0.0) {
            return Err(FusionError::Config("cadence_s must be > 0".into()));
        }
        if !(config.staleness_horizon_s >= 0.0) || !(config.merge_radius_m >= 0.0) {
            return Err(FusionError::Config("staleness_horizon_s and merge_radius_m must be >= 0".into()));
        }
        Ok(Self {
            config,
            clock: StreamClock::default(),
            pending: VecDeque::new(),
            tracked: Vec::new(),
            last_refresh: None,
            published: Vec::new(),
        })
    }

    fn merge(&mut self, obs: Observation) {
        let nearest = self
            .tracked
            .iter()
            .enumerate()
            .map(|(i, t)| (i, t.position.distance(&obs.position)))
            .filter(|(_, d)| *d <= self.config.merge_radius_m)
            .min_by(|a, b| a.1.total_cmp(&b.1));
        let target = Target {
            position: obs.position,
            strength: obs.strength,
            last_seen: obs.time_s,
        };
        match nearest {
            Some((i, _)) => self.tracked[i] = target,
            None => self.tracked.push(target),
        }
    }

    fn refresh(&mut self, tick: f64) {
        while self.pending.front().is_some_and(|o| o.time_s <= tick) {
            let obs = self.pending.pop_front().unwrap();
            self.merge(obs);
        }
        let horizon = self.config.staleness_horizon_s;
        self.tracked.retain(|t| tick - t.last_seen <= horizon);
        self.published = self
            .tracked
            .iter()
            .map(|t| EstimatedLocation {
                position: t.position,
                strength: t.strength as f64,
            })
            .collect();
        self.last_refresh = Some(tick);
    }

    /// Publishes every cadence tick up to `t` that has not been published yet.
    pub fn staff_surrogate_step(&mut self, t: f64) -> EstimateSnapshot {
        let cadence = self.config.cadence_s;
        let latest = (t / cadence).floor() * cadence;
        let mut tick = match self.last_refresh {
            Some(r) => r + cadence,
            None => 0.0,
        };
        while tick <= latest {
            self.refresh(tick);
            tick += cadence;
        }
        EstimateSnapshot {
            time_s: t,
            locations: self.published.clone(),
            grid: None,
        }
    }
}

impl FusionEngine for StaffSurrogate {
    fn name(&self) -> &str {
        "staff_surrogate"
    }

    fn update_cadence_s(&self) -> f64 {
        self.config.cadence_s
    }

    fn ingest(&mut self, observation: &Observation) -> Result<(), FusionError> {
        self.clock.admit(observation.time_s)?;
        self.pending.push_back(*observation);
        Ok(())
    }

    fn estimate(&mut self, t: f64) -> Result<EstimateSnapshot, FusionError> {
        self.clock.check_estimate(t)?;
        Ok(self.staff_surrogate_step(t))
    }
}
