use rand::seq::index::sample;
use rand::Rng;

use super::{DeceivedView, EntityId, ObserverModel, Scenario, Side, WorldError, WorldState};
use crate::fusion::Observation;
use crate::geom::Point;
use crate::rng::{standard_normal, unit_f64};

/// Where a report really came from. Harness bookkeeping only: fusion engines
/// receive [`Observation`]s, which carry no origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    TrueDetection(EntityId),
    Decoy,
    InitialIntel(EntityId),
}

impl Origin {
    pub fn kind(&self) -> &'static str {
        match self {
            Origin::TrueDetection(_) => "TrueDetection",
            Origin::Decoy => "Decoy",
            Origin::InitialIntel(_) => "InitialIntel",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub time_s: f64,
    pub reported_position: Point,
    pub reported_strength: u32,
    pub origin: Origin,
}

impl Report {
    /// The part of the report a fusion engine may see.
    pub fn observation(&self) -> Observation {
        Observation {
            time_s: self.time_s,
            position: self.reported_position,
            strength: self.reported_strength,
        }
    }
}

/// One observation window.
///
/// Candidates are visible Red entities (id order) followed by decoys. A
/// candidate within `detection_radius_m` of any observer is missed with
/// `miss_prob` (one uniform draw); otherwise its report gets Gaussian noise
/// on x, y and strength, in that order. Positions are clamped to the area.
pub fn observe<R: Rng + ?Sized>(
    view: &DeceivedView,
    model: &ObserverModel,
    observers: &[Point],
    t: f64,
    rng: &mut R,
) -> Vec<Report> {
    let area = view.state.scenario.area();
    let in_range = |p: &Point| observers.iter().any(|o| o.distance(p) <= model.detection_radius_m);
    let candidates = view
        .state
        .side(Side::Red)
        .filter(|e| !e.concealed)
        .map(|e| (e.position, e.strength, Origin::TrueDetection(e.id)))
        .chain(view.decoys.iter().map(|d| (d.position, d.strength, Origin::Decoy)));

    let mut reports = Vec::new();
    for (position, strength, origin) in candidates {
        if !in_range(&position) {
            continue;
        }
        if unit_f64(rng) < model.miss_prob {
            continue;
        }
        let dx = standard_normal(rng) * model.position_noise_sigma_m;
        let dy = standard_normal(rng) * model.position_noise_sigma_m;
        let ds = standard_normal(rng) * model.strength_noise_sigma;
        reports.push(Report {
            time_s: t,
            reported_position: area.clamp(position.translate(dx, dy)),
            reported_strength: (strength as f64 + ds).round().max(0.0) as u32,
            origin,
        });
    }
    reports
}

/// Pre-battle intelligence: `round(fraction * red_team_count)` distinct Red
/// entities reported exactly, in id order.
pub fn initial_intel<R: Rng + ?Sized>(
    scenario: &Scenario,
    state: &WorldState,
    rng: &mut R,
) -> Result<Vec<Report>, WorldError> {
    if state.time_s != 0.0 {
        return Err(WorldError::IntelNotAtStart(state.time_s));
    }
    let reds: Vec<_> = state.side(Side::Red).collect();
    let count = ((scenario.initial_intel_fraction * scenario.red_team_count as f64).round() as usize).min(reds.len());
    let mut chosen = sample(rng, reds.len(), count).into_vec();
    chosen.sort_unstable();
    Ok(chosen
        .into_iter()
        .map(|i| {
            let e = reds[i];
            Report {
                time_s: 0.0,
                reported_position: e.position,
                reported_strength: e.strength,
                origin: Origin::InitialIntel(e.id),
            }
        })
        .collect())
}
