use serde::{Deserialize, Serialize};

use super::ScenarioError;
use crate::geom::{Area, Point};

/// How the Red side hides and fakes its presence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DeceptionPolicy {
    /// Per-entity, per-observation-window probability that a Red entity is concealed.
    pub concealment_prob: f64,
    /// Expected number of phantom decoys per observation window.
    pub decoy_rate: f64,
    /// Inclusive `[min, max]` fighter count of a decoy.
    pub decoy_strength_range: [u32; 2],
}

impl Default for DeceptionPolicy {
    fn default() -> Self {
        Self {
            concealment_prob: 0.3,
            decoy_rate: 1.0,
            decoy_strength_range: [1, 3],
        }
    }
}

impl DeceptionPolicy {
    /// A deceiver that does nothing.
    pub fn identity() -> Self {
        Self {
            concealment_prob: 0.0,
            decoy_rate: 0.0,
            decoy_strength_range: [1, 1],
        }
    }
}

/// Radial sensor model carried by every Blue entity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ObserverModel {
    pub detection_radius_m: f64,
    pub position_noise_sigma_m: f64,
    pub strength_noise_sigma: f64,
    pub miss_prob: f64,
    pub report_period_s: f64,
}

impl Default for ObserverModel {
    fn default() -> Self {
        Self {
            detection_radius_m: 400.0,
            position_noise_sigma_m: 25.0,
            strength_noise_sigma: 0.5,
            miss_prob: 0.3,
            report_period_s: 60.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Scenario {
    pub area_width_m: f64,
    pub area_height_m: f64,
    pub red_team_count: u32,
    pub red_team_strength: u32,
    pub blue_team_count: u32,
    pub blue_team_strength: u32,
    pub red_speed_mps: f64,
    pub blue_speed_mps: f64,
    pub duration_s: f64,
    pub initial_intel_fraction: f64,
    pub objective_points: Vec<Point>,
    /// Per-fighter loss rate (1/s). Zero disables attrition.
    pub attrition_rate_per_s: f64,
    pub deception: DeceptionPolicy,
    pub observer: ObserverModel,
    pub rng_seed: u64,
}

impl Default for Scenario {
    fn default() -> Self {
        Self {
            area_width_m: 2000.0,
            area_height_m: 2000.0,
            red_team_count: 20,
            red_team_strength: 3,
            blue_team_count: 18,
            blue_team_strength: 4,
            red_speed_mps: 1.5,
            blue_speed_mps: 1.0,
            duration_s: 7200.0,
            initial_intel_fraction: 0.20,
            objective_points: vec![
                Point::new(600.0, 600.0),
                Point::new(1400.0, 600.0),
                Point::new(1400.0, 1400.0),
                Point::new(600.0, 1400.0),
            ],
            attrition_rate_per_s: 0.0,
            deception: DeceptionPolicy::default(),
            observer: ObserverModel::default(),
            rng_seed: 0,
        }
    }
}

fn invalid(field: &'static str, reason: impl Into<String>) -> ScenarioError {
    ScenarioError::Invalid {
        field,
        reason: reason.into(),
    }
}

fn check_prob(field: &'static str, v: f64) -> Result<(), ScenarioError> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(invalid(field, format!("{v} is outside [0, 1]")))
    }
}

fn check_positive(field: &'static str, v: f64) -> Result<(), ScenarioError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(invalid(field, format!("{v} must be > 0")))
    }
}

fn check_non_negative(field: &'static str, v: f64) -> Result<(), ScenarioError> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(invalid(field, format!("{v} must be >= 0")))
    }
}

impl Scenario {
    pub fn area(&self) -> Area {
        Area::new(self.area_width_m, self.area_height_m)
    }

    pub fn total_red_strength(&self) -> u32 {
        self.red_team_count * self.red_team_strength
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        check_positive("area_width_m", self.area_width_m)?;
        check_positive("area_height_m", self.area_height_m)?;
        if self.red_team_count < 1 {
            return Err(invalid("red_team_count", "must be >= 1"));
        }
        if self.blue_team_count < 1 {
            return Err(invalid("blue_team_count", "must be >= 1"));
        }
        if self.red_team_strength < 1 {
            return Err(invalid("red_team_strength", "must be >= 1"));
        }
        if self.blue_team_strength < 1 {
            return Err(invalid("blue_team_strength", "must be >= 1"));
        }
        check_non_negative("red_speed_mps", self.red_speed_mps)?;
        check_non_negative("blue_speed_mps", self.blue_speed_mps)?;
        check_positive("duration_s", self.duration_s)?;
        check_prob("initial_intel_fraction", self.initial_intel_fraction)?;
        check_non_negative("attrition_rate_per_s", self.attrition_rate_per_s)?;
        let area = self.area();
        if let Some(p) = self.objective_points.iter().find(|p| !area.contains(p)) {
            return Err(invalid(
                "objective_points",
                format!("({}, {}) lies outside the area", p.x, p.y),
            ));
        }

        let d = &self.deception;
        check_prob("deception.concealment_prob", d.concealment_prob)?;
        check_non_negative("deception.decoy_rate", d.decoy_rate)?;
        if d.decoy_rate > 100.0 {
            return Err(invalid("deception.decoy_rate", "must be <= 100"));
        }
        if d.decoy_strength_range[0] > d.decoy_strength_range[1] {
            return Err(invalid("deception.decoy_strength_range", "min exceeds max"));
        }

        let o = &self.observer;
        check_positive("observer.detection_radius_m", o.detection_radius_m)?;
        check_non_negative("observer.position_noise_sigma_m", o.position_noise_sigma_m)?;
        check_non_negative("observer.strength_noise_sigma", o.strength_noise_sigma)?;
        check_prob("observer.miss_prob", o.miss_prob)?;
        check_positive("observer.report_period_s", o.report_period_s)?;
        Ok(())
    }
}

/// Parses a TOML scenario. Omitted keys take the [`Scenario::default`] values;
/// unknown keys are rejected.
pub fn load_scenario(source: &str) -> Result<Scenario, ScenarioError> {
    let scenario: Scenario =
        toml::from_str(source).map_err(|e| ScenarioError::Parse(e.to_string()))?;
    scenario.validate()?;
    Ok(scenario)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_takes_defaults() {
        let s = load_scenario("rng_seed = 11\n").unwrap();
        assert_eq!(s.rng_seed, 11);
        assert_eq!((s.area_width_m, s.area_height_m), (2000.0, 2000.0));
        assert_eq!((s.red_team_count, s.red_team_strength), (20, 3));
        assert_eq!((s.blue_team_count, s.blue_team_strength), (18, 4));
        assert_eq!(s.duration_s, 7200.0);
        assert_eq!(s.initial_intel_fraction, 0.20);
    }

    #[test]
    fn equal_speeds_are_accepted() {
        let s = load_scenario("rng_seed = 1\nred_speed_mps = 1.2\nblue_speed_mps = 1.2\n").unwrap();
        assert_eq!(s.red_speed_mps, s.blue_speed_mps);
    }

    #[test]
    fn out_of_range_intel_fraction_names_the_field() {
        let err = load_scenario("rng_seed = 1\ninitial_intel_fraction = 1.5\n").unwrap_err();
        match err {
            ScenarioError::Invalid { field, .. } => assert_eq!(field, "initial_intel_fraction"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(err_text("initial_intel_fraction = 1.5").contains("initial_intel_fraction"));
    }

    fn err_text(src: &str) -> String {
        load_scenario(src).unwrap_err().to_string()
    }

    #[test]
    fn unknown_key_is_a_parse_error_with_location() {
        let msg = err_text("rng_seed = 1\nbogus_key = 3\n");
        assert!(msg.contains("bogus_key"), "{msg}");
        assert!(msg.contains("line 2") || msg.contains("2:"), "{msg}");
    }

    #[test]
    fn nested_sections_parse() {
        let s = load_scenario(
            "rng_seed = 3\n[deception]\nconcealment_prob = 0.8\ndecoy_rate = 0\n\
             [observer]\nmiss_prob = 0.1\n",
        )
        .unwrap();
        assert_eq!(s.deception.concealment_prob, 0.8);
        assert_eq!(s.deception.decoy_rate, 0.0);
        assert_eq!(s.observer.miss_prob, 0.1);
        assert_eq!(s.observer.detection_radius_m, 400.0);
    }

    #[test]
    fn zero_area_and_outside_objectives_rejected() {
        assert!(err_text("area_width_m = 0").contains("area_width_m"));
        assert!(err_text("objective_points = [{ x = 5000.0, y = 10.0 }]").contains("objective_points"));
        assert!(err_text("[deception]\ndecoy_strength_range = [4, 2]").contains("decoy_strength_range"));
    }
}
