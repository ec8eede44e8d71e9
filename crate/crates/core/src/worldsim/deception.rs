use rand::Rng;

use super::{DeceptionPolicy, Side, WorldState};
use crate::geom::Point;
use crate::rng::{poisson, unit_f64};

/// A phantom Red team injected by the deceiver.
#[derive(Debug, Clone, PartialEq)]
pub struct Decoy {
    pub position: Point,
    pub strength: u32,
}

/// The world as the deceiver lets it be seen: concealment flags set on the
/// state, plus any decoys.
#[derive(Debug, Clone, PartialEq)]
pub struct DeceivedView {
    pub state: WorldState,
    pub decoys: Vec<Decoy>,
}

/// Applies one observation window's worth of deception.
///
/// Draw order on `rng`: the decoy count (one `u64`, see
/// [`crate::rng::poisson`]), one concealment draw per Red entity in id order,
/// then position and strength for each decoy. Blue entities are never
/// concealed.
pub fn apply_deception<R: Rng + ?Sized>(state: &WorldState, policy: &DeceptionPolicy, rng: &mut R) -> DeceivedView {
    let decoy_count = poisson(rng, policy.decoy_rate);
    let mut view = state.clone();
    for e in &mut view.entities {
        e.concealed = match e.side {
            Side::Red => unit_f64(rng) < policy.concealment_prob,
            Side::Blue => false,
        };
    }
    let area = state.scenario.area();
    let [lo, hi] = policy.decoy_strength_range;
    let decoys = (0..decoy_count)
        .map(|_| {
            let position = Point::new(unit_f64(rng) * area.width, unit_f64(rng) * area.height);
            let strength = lo + (rng.next_u64() % (hi - lo + 1) as u64) as u32;
            Decoy { position, strength }
        })
        .collect();
    DeceivedView { state: view, decoys }
}
