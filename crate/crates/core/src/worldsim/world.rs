use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{Scenario, WorldError};
use crate::geom::Point;
use crate::rng::unit_f64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EntityId(pub u32);

impl fmt::Display for EntityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Red,
    Blue,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Red => "Red",
            Side::Blue => "Blue",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Entity {
    pub id: EntityId,
    pub side: Side,
    pub position: Point,
    pub strength: u32,
    pub speed_mps: f64,
    pub concealed: bool,
    pub waypoint: Option<Point>,
    /// Index into the scenario's objective list that `waypoint` refers to.
    pub objective_index: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WorldState {
    pub time_s: f64,
    pub entities: Vec<Entity>,
    pub scenario: Arc<Scenario>,
}

impl WorldState {
    pub fn side(&self, side: Side) -> impl Iterator<Item = &Entity> {
        self.entities.iter().filter(move |e| e.side == side)
    }

    pub fn blue_positions(&self) -> Vec<Point> {
        self.side(Side::Blue).map(|e| e.position).collect()
    }

    pub fn total_strength(&self, side: Side) -> u64 {
        self.side(side).map(|e| e.strength as u64).sum()
    }
}

/// Places all entities uniformly inside the area. Red ids come first.
///
/// Entity `i` of each side starts heading for objective `i mod K`.
pub fn init_world<R: Rng + ?Sized>(scenario: Arc<Scenario>, rng: &mut R) -> WorldState {
    let area = scenario.area();
    let objectives = &scenario.objective_points;
    let mut entities = Vec::with_capacity((scenario.red_team_count + scenario.blue_team_count) as usize);
    let teams = [
        (Side::Red, scenario.red_team_count, scenario.red_team_strength, scenario.red_speed_mps),
        (Side::Blue, scenario.blue_team_count, scenario.blue_team_strength, scenario.blue_speed_mps),
    ];
    let mut next_id = 0u32;
    for (side, count, strength, speed) in teams {
        for i in 0..count as usize {
            let position = Point::new(unit_f64(rng) * area.width, unit_f64(rng) * area.height);
            let objective_index = (!objectives.is_empty()).then(|| i % objectives.len());
            entities.push(Entity {
                id: EntityId(next_id),
                side,
                position,
                strength,
                speed_mps: speed,
                concealed: false,
                waypoint: objective_index.map(|k| objectives[k]),
                objective_index,
            });
            next_id += 1;
        }
    }
    WorldState {
        time_s: 0.0,
        entities,
        scenario,
    }
}

/// Moves every entity toward its waypoint by at most `speed * dt`.
///
/// An entity that reaches its waypoint stops there and takes the next
/// objective in round-robin order as its new waypoint.
pub fn step_world(state: &WorldState, dt_s: f64) -> Result<WorldState, WorldError> {
    if !(dt_s > 0.0) {
        return Err(WorldError::NonPositiveStep(dt_s));
    }
    let area = state.scenario.area();
    let objectives = &state.scenario.objective_points;
    let mut next = state.clone();
    for e in &mut next.entities {
        let Some(target) = e.waypoint else { continue };
        let remaining = e.position.distance(&target);
        let travel = e.speed_mps * dt_s;
        if travel >= remaining {
            e.position = target;
            if let Some(k) = e.objective_index {
                let k = (k + 1) % objectives.len();
                e.objective_index = Some(k);
                e.waypoint = Some(objectives[k]);
            }
        } else {
            let f = travel / remaining;
            e.position = Point::new(
                e.position.x + (target.x - e.position.x) * f,
                e.position.y + (target.y - e.position.y) * f,
            );
        }
        e.position = area.clamp(e.position);
    }
    next.time_s = state.time_s + dt_s;
    Ok(next)
}

/// Removes each fighter independently with probability `1 - exp(-rate * dt)`.
pub fn apply_attrition<R: Rng + ?Sized>(state: &mut WorldState, rate_per_s: f64, dt_s: f64, rng: &mut R) {
    if rate_per_s <= 0.0 {
        return;
    }
    let survive = (-rate_per_s * dt_s).exp();
    for e in &mut state.entities {
        e.strength = (0..e.strength).filter(|_| unit_f64(rng) < survive).count() as u32;
    }
}
