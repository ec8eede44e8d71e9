use fusval::fusion::{
    EstimateSnapshot, FusionEngine, FusionError, GridBayesConfig, GridBayesEngine, Observation, StaffSurrogate,
    StaffSurrogateConfig,
};
use fusval::metrics::GridGeometry;
use fusval::{Area, Point};

fn obs(t: f64, x: f64, y: f64, s: u32) -> Observation {
    Observation {
        time_s: t,
        position: Point::new(x, y),
        strength: s,
    }
}

#[test]
fn single_report_on_3x3_matches_hand_bayes() {
    let config = GridBayesConfig {
        diffusion_scale: 0.0,
        forgetting: 0.0,
        likelihood_floor: 0.05,
        position_sigma_m: 8.0,
        ..GridBayesConfig::default()
    };
    let mut engine = GridBayesEngine::with_geometry(config, GridGeometry::new(3, 3, 10.0).unwrap());
    engine.ingest(&obs(0.0, 15.0, 15.0, 3)).unwrap();
    let snap = engine.estimate(0.0).unwrap();
    let grid = snap.grid.unwrap();

    // prior 1/9 everywhere; likelihood floor + exp(-d^2 / 128)
    let l = |d2: f64| 0.05 + (-d2 / 128.0).exp();
    let (center, edge, corner) = (l(0.0), l(100.0), l(200.0));
    let z = center + 4.0 * edge + 4.0 * corner;
    let expected = [corner, edge, corner, edge, center, edge, corner, edge, corner].map(|v| v / z);
    for (got, want) in grid.values.iter().zip(expected) {
        assert!((got - want).abs() < 1e-15, "{got} vs {want}");
    }
    let argmax = grid.values.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0;
    assert_eq!(argmax, 4);
    assert_eq!(snap.locations.len(), 1);
    assert_eq!(snap.locations[0].position, Point::new(15.0, 15.0));
}

/// 1-D diffusion matrix with half-sample mirror boundaries, built from the
/// kernel formula rather than the engine's helpers.
fn diffusion_matrix(n: usize, sigma: f64) -> Vec<Vec<f64>> {
    let radius = (3.0 * sigma).ceil() as i64;
    let raw: Vec<f64> = (-radius..=radius).map(|k| (-((k * k) as f64) / (2.0 * sigma * sigma)).exp()).collect();
    let total: f64 = raw.iter().sum();
    let mut m = vec![vec![0.0; n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        for (k, w) in raw.iter().enumerate() {
            let mut j = i as i64 + k as i64 - radius;
            // mirror across -0.5 and n-0.5 until inside
            loop {
                if j < 0 {
                    j = -j - 1;
                } else if j >= n as i64 {
                    j = 2 * n as i64 - j - 1;
                } else {
                    break;
                }
            }
            row[j as usize] += w / total;
        }
    }
    m
}

#[test]
#[allow(clippy::needless_range_loop)]
fn predict_update_on_5x5_matches_dense_matrix() {
    let config = GridBayesConfig {
        cell_size_m: 100.0,
        tick_s: 60.0,
        assumed_red_speed_mps: 1.5,
        diffusion_scale: 1.0,
        position_sigma_m: 60.0,
        likelihood_floor: 0.2,
        forgetting: 0.03,
        ..GridBayesConfig::default()
    };
    let n = 5;
    let mut engine = GridBayesEngine::new(config.clone(), Area::new(500.0, 500.0)).unwrap();
    let report = obs(0.0, 130.0, 320.0, 3);
    engine.ingest(&report).unwrap();
    let snap = engine.estimate(60.0).unwrap();
    let got = snap.grid.unwrap().values;

    // update from the uniform prior
    let mut post: Vec<f64> = (0..n * n)
        .map(|i| {
            let (r, c) = (i / n, i % n);
            let (x, y) = (50.0 + 100.0 * c as f64, 50.0 + 100.0 * r as f64);
            let d2 = (x - 130.0f64).powi(2) + (y - 320.0f64).powi(2);
            (0.2 + (-d2 / (2.0 * 60.0 * 60.0)).exp()) / (n * n) as f64
        })
        .collect();
    let z: f64 = post.iter().sum();
    post.iter_mut().for_each(|p| *p /= z);

    // dense 25x25 predict: (1 - a) * (K_rows ⊗ K_cols) + a / 25
    let sigma = 1.5 * 60.0 / 2f64.sqrt() / 100.0;
    let k1 = diffusion_matrix(n, sigma);
    let a = 0.03;
    let mut dense = vec![vec![0.0; n * n]; n * n];
    for src in 0..n * n {
        for dst in 0..n * n {
            let (rs, cs) = (src / n, src % n);
            let (rd, cd) = (dst / n, dst % n);
            dense[dst][src] = (1.0 - a) * k1[rs][rd] * k1[cs][cd] + a / (n * n) as f64;
        }
    }
    let mut want: Vec<f64> = (0..n * n).map(|d| (0..n * n).map(|s| dense[d][s] * post[s]).sum()).collect();
    let z: f64 = want.iter().sum();
    want.iter_mut().for_each(|p| *p /= z);

    for (i, (g, w)) in got.iter().zip(&want).enumerate() {
        assert!((g - w).abs() < 1e-12, "cell {i}: {g} vs {w}");
    }
    assert!((got.iter().sum::<f64>() - 1.0).abs() < 1e-12);
}

#[test]
fn grid_mass_stays_normalized_through_a_stream() {
    let mut engine = GridBayesEngine::new(GridBayesConfig::default(), Area::new(2000.0, 2000.0)).unwrap();
    let mut t = 0.0;
    for i in 0..200 {
        t += 30.0 * (i % 3) as f64;
        let x = (i * 37 % 2000) as f64;
        let y = (i * 91 % 2000) as f64;
        engine.ingest(&obs(t, x, y, 3)).unwrap();
        if i % 5 == 0 {
            let s = engine.estimate(t).unwrap();
            let total: f64 = s.grid.unwrap().values.iter().sum();
            assert!((total - 1.0).abs() < 1e-9);
            assert!(s.locations.iter().all(|l| l.strength >= 0.0));
        }
    }
}

#[test]
fn engines_reject_out_of_order_reports() {
    let mut g = GridBayesEngine::new(GridBayesConfig::default(), Area::new(100.0, 100.0)).unwrap();
    let mut s = StaffSurrogate::new(StaffSurrogateConfig::default()).unwrap();
    for e in [&mut g as &mut dyn FusionEngine, &mut s] {
        e.ingest(&obs(120.0, 1.0, 1.0, 1)).unwrap();
        assert!(matches!(e.ingest(&obs(60.0, 1.0, 1.0, 1)), Err(FusionError::OutOfOrder { .. })));
    }
}

#[test]
fn staff_examples() {
    let mut s = StaffSurrogate::new(StaffSurrogateConfig::default()).unwrap();
    s.ingest(&obs(0.0, 100.0, 200.0, 3)).unwrap();
    let snap = s.estimate(0.0).unwrap();
    assert_eq!(snap.locations.len(), 1);
    assert_eq!(snap.locations[0].position, Point::new(100.0, 200.0));
    assert_eq!(snap.locations[0].strength, 3.0);
    assert_eq!(s.estimate(600.0).unwrap().locations, snap.locations);
    assert!(s.estimate(2700.0).unwrap().locations.is_empty());

    let mut s = StaffSurrogate::new(StaffSurrogateConfig::default()).unwrap();
    s.ingest(&obs(60.0, 500.0, 500.0, 2)).unwrap();
    s.ingest(&obs(120.0, 510.0, 500.0, 4)).unwrap();
    let snap = s.estimate(900.0).unwrap();
    assert_eq!(snap.locations.len(), 1);
    assert_eq!(snap.locations[0].position, Point::new(510.0, 500.0));
}

/// The merge rule replayed by hand on a plain list.
fn replay(reports: &[Observation], ticks: &[f64], config: &StaffSurrogateConfig) -> Vec<Vec<(Point, u32)>> {
    let mut tracked: Vec<(Point, u32, f64)> = Vec::new();
    let mut published = Vec::new();
    let mut next = 0;
    for &tick in ticks {
        while next < reports.len() && reports[next].time_s <= tick {
            let r = reports[next];
            let mut best: Option<(usize, f64)> = None;
            for (i, t) in tracked.iter().enumerate() {
                let d = t.0.distance(&r.position);
                if d <= config.merge_radius_m && best.is_none_or(|(_, bd)| d < bd) {
                    best = Some((i, d));
                }
            }
            match best {
                Some((i, _)) => tracked[i] = (r.position, r.strength, r.time_s),
                None => tracked.push((r.position, r.strength, r.time_s)),
            }
            next += 1;
        }
        tracked.retain(|t| tick - t.2 <= config.staleness_horizon_s);
        published.push(tracked.iter().map(|t| (t.0, t.1)).collect());
    }
    published
}

#[test]
fn staff_merge_rule_replay() {
    let config = StaffSurrogateConfig::default();
    let mut reports = Vec::new();
    let mut seed = 12345u64;
    let mut next = || {
        seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (seed >> 11) as f64 / (1u64 << 53) as f64
    };
    for k in 0..120 {
        for _ in 0..(k % 4) {
            reports.push(obs(60.0 * k as f64, next() * 2000.0, next() * 2000.0, 1 + (next() * 4.0) as u32));
        }
    }
    let ticks: Vec<f64> = (0..=8).map(|i| 900.0 * i as f64).collect();
    let expected = replay(&reports, &ticks, &config);

    let mut engine = StaffSurrogate::new(config).unwrap();
    let mut fed = 0;
    for (tick, want) in ticks.iter().zip(&expected) {
        while fed < reports.len() && reports[fed].time_s <= *tick {
            engine.ingest(&reports[fed]).unwrap();
            fed += 1;
        }
        let snap: EstimateSnapshot = engine.estimate(*tick).unwrap();
        let got: Vec<(Point, u32)> = snap.locations.iter().map(|l| (l.position, l.strength as u32)).collect();
        assert_eq!(&got, want, "tick {tick}");
    }
}
