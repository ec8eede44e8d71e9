mod common;

use std::sync::Arc;

use fusval::rng::{poisson, Purpose, SeedStreams};
use fusval::worldsim::{
    apply_attrition, apply_deception, init_world, initial_intel, load_scenario, observe, step_world, DeceivedView,
    DeceptionPolicy, ObserverModel, Origin, Scenario, Side,
};
use fusval::Point;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{DiscreteCDF, Poisson};

/// The documented stream layout, rebuilt from the raw generator.
fn raw_stream(seed: u64, purpose: u64, index: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream((purpose << 56) | index);
    r
}

/// Smallest k with P(X <= k) >= u, using the incomplete-gamma CDF.
fn poisson_oracle(u: f64, lambda: f64) -> u64 {
    let dist = Poisson::new(lambda).unwrap();
    (0..).find(|&k| dist.cdf(k) >= u).unwrap()
}

#[test]
fn poisson_matches_independent_cdf() {
    for (seed, lambda) in [(1u64, 0.5), (2, 1.0), (3, 3.0), (4, 7.5), (5, 20.0)] {
        let mut ours = SeedStreams::new(seed).substream(Purpose::Deception, 9);
        let mut raw = raw_stream(seed, 2, 9);
        for _ in 0..2000 {
            let u = (raw.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
            assert_eq!(poisson(&mut ours, lambda), poisson_oracle(u, lambda), "seed {seed} lambda {lambda}");
        }
    }
}

#[test]
fn decoy_count_is_the_first_poisson_draw_of_the_window() {
    let scenario = Arc::new(Scenario::default());
    let state = init_world(scenario.clone(), &mut SeedStreams::new(8).substream(Purpose::Placement, 0));
    let policy = DeceptionPolicy {
        decoy_rate: 3.0,
        ..DeceptionPolicy::default()
    };
    for tick in 0..50u64 {
        let view = apply_deception(&state, &policy, &mut SeedStreams::new(8).substream(Purpose::Deception, tick));
        let u = (raw_stream(8, 2, tick).next_u64() >> 11) as f64 / (1u64 << 53) as f64;
        assert_eq!(view.decoys.len() as u64, poisson_oracle(u, 3.0));
        for d in &view.decoys {
            assert!(scenario.area().contains(&d.position));
            assert!((1..=3).contains(&d.strength));
        }
    }
}

#[test]
fn miss_frequency_of_an_always_visible_entity() {
    let scenario = Arc::new(Scenario {
        red_team_count: 1,
        blue_team_count: 1,
        ..Scenario::default()
    });
    let state = init_world(scenario.clone(), &mut SeedStreams::new(1).substream(Purpose::Placement, 0));
    let view = apply_deception(&state, &DeceptionPolicy::identity(), &mut ChaCha8Rng::seed_from_u64(0));
    let red = state.side(Side::Red).next().unwrap().position;
    let model = ObserverModel::default();
    let streams = SeedStreams::new(77);
    let windows = 10_000u64;
    let detected: usize = (0..windows)
        .map(|w| observe(&view, &model, &[red], 60.0 * w as f64, &mut streams.substream(Purpose::Observation, w)).len())
        .sum();
    let miss_rate = 1.0 - detected as f64 / windows as f64;
    assert!((miss_rate - 0.3).abs() <= 0.02, "miss rate {miss_rate}");
}

#[test]
fn noiseless_observer_reports_true_positions() {
    let scenario = Arc::new(Scenario::default());
    let state = init_world(scenario, &mut SeedStreams::new(4).substream(Purpose::Placement, 0));
    let view = apply_deception(&state, &DeceptionPolicy::identity(), &mut ChaCha8Rng::seed_from_u64(0));
    let model = ObserverModel {
        position_noise_sigma_m: 0.0,
        strength_noise_sigma: 0.0,
        miss_prob: 0.0,
        ..ObserverModel::default()
    };
    let observers = state.blue_positions();
    let reports = observe(&view, &model, &observers, 0.0, &mut ChaCha8Rng::seed_from_u64(1));
    let in_range: Vec<_> = state
        .side(Side::Red)
        .filter(|e| observers.iter().any(|o| o.distance(&e.position) <= model.detection_radius_m))
        .collect();
    assert_eq!(reports.len(), in_range.len());
    for (r, e) in reports.iter().zip(in_range) {
        assert_eq!(r.reported_position, e.position);
        assert_eq!(r.reported_strength, e.strength);
        assert_eq!(r.origin, Origin::TrueDetection(e.id));
    }
}

/// Runs the per-tick pipeline by hand and checks the worldsim invariants.
#[test]
fn run_invariants_hold_over_a_full_run() {
    let scenario = Arc::new(Scenario {
        attrition_rate_per_s: 0.0,
        deception: DeceptionPolicy {
            concealment_prob: 0.5,
            decoy_rate: 2.0,
            decoy_strength_range: [1, 4],
        },
        ..Scenario::default()
    });
    let area = scenario.area();
    let streams = SeedStreams::new(21);
    let mut state = init_world(scenario.clone(), &mut streams.substream(Purpose::Placement, 0));
    assert_eq!(state.entities.len(), 38);
    let total = state.total_strength(Side::Red);
    let intel = initial_intel(&scenario, &state, &mut streams.substream(Purpose::InitialIntel, 0)).unwrap();
    assert_eq!(intel.len(), 4);
    let mut true_reports = 0;
    for k in 0..=120u64 {
        if k > 0 {
            let next = step_world(&state, 60.0).unwrap();
            assert!(next.time_s > state.time_s);
            state = next;
        }
        assert_eq!(state.total_strength(Side::Red), total);
        assert!(state.entities.iter().all(|e| area.contains(&e.position)));
        let view = apply_deception(&state, &scenario.deception, &mut streams.substream(Purpose::Deception, k));
        let reports = observe(
            &view,
            &scenario.observer,
            &state.blue_positions(),
            state.time_s,
            &mut streams.substream(Purpose::Observation, k),
        );
        for r in &reports {
            assert!(area.contains(&r.reported_position));
            if let Origin::TrueDetection(id) = r.origin {
                true_reports += 1;
                let e = view.state.entities.iter().find(|e| e.id == id).unwrap();
                assert!(!e.concealed, "tick {k}: concealed entity {id:?} was reported");
                assert_eq!(e.side, Side::Red);
            }
        }
    }
    assert!(true_reports > 100);
}

#[test]
fn identity_deceiver_leaves_the_report_stream_unchanged() {
    let scenario = Arc::new(Scenario {
        deception: DeceptionPolicy::identity(),
        ..Scenario::default()
    });
    let streams = SeedStreams::new(5);
    let mut state = init_world(scenario.clone(), &mut streams.substream(Purpose::Placement, 0));
    for k in 0..60u64 {
        if k > 0 {
            state = step_world(&state, 60.0).unwrap();
        }
        let deceived = apply_deception(&state, &scenario.deception, &mut streams.substream(Purpose::Deception, k));
        assert_eq!(deceived.state, state);
        let plain = DeceivedView {
            state: state.clone(),
            decoys: Vec::new(),
        };
        let observers = state.blue_positions();
        let a = observe(&deceived, &scenario.observer, &observers, state.time_s, &mut streams.substream(Purpose::Observation, k));
        let b = observe(&plain, &scenario.observer, &observers, state.time_s, &mut streams.substream(Purpose::Observation, k));
        assert_eq!(a, b);
    }
}

#[test]
fn attrition_only_removes_fighters() {
    let scenario = Arc::new(Scenario::default());
    let mut state = init_world(scenario, &mut SeedStreams::new(2).substream(Purpose::Placement, 0));
    let before = state.total_strength(Side::Red) + state.total_strength(Side::Blue);
    apply_attrition(&mut state, 1e-3, 600.0, &mut SeedStreams::new(2).substream(Purpose::Attrition, 1));
    let after = state.total_strength(Side::Red) + state.total_strength(Side::Blue);
    assert!(after < before);
    // expected survival exp(-0.6) of 132 fighters is about 72
    assert!((40..110).contains(&after), "{after}");
}

#[test]
fn scenario_examples() {
    let s = load_scenario("rng_seed = 9").unwrap();
    assert_eq!((s.area_width_m, s.area_height_m), (2000.0, 2000.0));
    assert_eq!((s.red_team_count, s.red_team_strength, s.blue_team_count, s.blue_team_strength), (20, 3, 18, 4));
    assert_eq!((s.duration_s, s.initial_intel_fraction), (7200.0, 0.2));
    assert!(load_scenario("red_speed_mps = 1.0\nblue_speed_mps = 1.0").is_ok());
    let err = load_scenario("initial_intel_fraction = 1.5").unwrap_err().to_string();
    assert!(err.contains("initial_intel_fraction"), "{err}");
    let shipped = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs/scenario.toml")).unwrap();
    assert_eq!(load_scenario(&shipped).unwrap(), Scenario::default());
}

#[test]
fn kinematics_example() {
    let scenario = Arc::new(Scenario {
        red_team_count: 1,
        blue_team_count: 1,
        objective_points: vec![Point::new(1100.0, 1000.0), Point::new(100.0, 100.0)],
        ..Scenario::default()
    });
    let mut state = init_world(scenario, &mut SeedStreams::new(0).substream(Purpose::Placement, 0));
    state.entities[0].position = Point::new(1000.0, 1000.0);
    let next = step_world(&state, 60.0).unwrap();
    assert!((next.entities[0].position.x - 1090.0).abs() < 1e-9);
    assert_eq!(next.entities[0].waypoint, Some(Point::new(1100.0, 1000.0)));
    assert!(step_world(&state, 0.0).is_err());
}
