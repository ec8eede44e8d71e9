//! Grid Bayesian occupancy filter.
//!
//! The state is a probability mass function over a regular grid covering the
//! area. Each `tick_s` tick the mass is diffused with a separable Gaussian
//! kernel (mirror-reflected at the borders, so uniform mass is a fixed point
//! and no mass leaks) and then blended with a small uniform share
//! (`forgetting`). Each report multiplies the mass by
//! `floor + exp(-d^2 / 2 sigma^2)`, `d` being the cell-center distance to
//! the reported position, followed by renormalization.
//!
//! Point estimates are local maxima above the mean cell mass (relative
//! tolerance 1e-9), suppressed within one cell of a stronger maximum; their
//! strength is the cell mass times the assumed total Red strength.

use serde::{Deserialize, Serialize};

use super::{EstimateSnapshot, EstimatedLocation, FusionEngine, FusionError, Observation, StreamClock};
use crate::geom::Area;
use crate::metrics::{GridGeometry, StrengthDistribution};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridBayesConfig {
    pub cell_size_m: f64,
    pub tick_s: f64,
    /// Assumed Red speed; sets the diffusion kernel width.
    pub assumed_red_speed_mps: f64,
    /// Multiplier on the per-axis kernel sigma `speed * tick / sqrt(2)`.
    pub diffusion_scale: f64,
    /// Assumed report position noise.
    pub position_sigma_m: f64,
    /// Likelihood far from a report. A report concerns one of many targets,
    /// so a floor comparable to the peak keeps the posterior multimodal.
    pub likelihood_floor: f64,
    /// Fraction of mass reset to uniform each tick.
    pub forgetting: f64,
    pub assumed_total_strength: f64,
}

impl Default for GridBayesConfig {
    fn default() -> Self {
        Self {
            cell_size_m: 25.0,
            tick_s: 60.0,
            assumed_red_speed_mps: 1.5,
            diffusion_scale: 1.0,
            position_sigma_m: 25.0,
            likelihood_floor: 1.0,
            forgetting: 0.01,
            assumed_total_strength: 60.0,
        }
    }
}

impl GridBayesConfig {
    fn validate(&self) -> Result<(), FusionError> {
        let bad = |m: &str| Err(FusionError::Config(m.to_string()));
        if !(self.cell_size_m > 0.0) || !(self.tick_s > 0.0) {
            return bad("cell_size_m and tick_s must be > 0");
        }
        if !(self.assumed_red_speed_mps >= 0.0) || !(self.diffusion_scale >= 0.0) {
            return bad("assumed_red_speed_mps and diffusion_scale must be >= 0");
        }
        if !(self.position_sigma_m > 0.0) {
            return bad("position_sigma_m must be > 0");
        }
        if !(self.likelihood_floor >= 0.0) {
            return bad("likelihood_floor must be >= 0");
        }
        if !(0.0..=1.0).contains(&self.forgetting) {
            return bad("forgetting must be in [0, 1]");
        }
        if !(self.assumed_total_strength >= 0.0) {
            return bad("assumed_total_strength must be >= 0");
        }
        Ok(())
    }

    /// Per-axis kernel sigma in cells.
    pub fn kernel_sigma_cells(&self) -> f64 {
        self.diffusion_scale * self.assumed_red_speed_mps * self.tick_s / std::f64::consts::SQRT_2 / self.cell_size_m
    }
}

/// Discrete Gaussian taps for offsets `-r..=r`, normalized to sum 1.
pub(crate) fn gaussian_kernel(sigma_cells: f64) -> Vec<f64> {
    if sigma_cells <= 0.0 {
        return vec![1.0];
    }
    let radius = (3.0 * sigma_cells).ceil() as i64;
    let taps: Vec<f64> = (-radius..=radius)
        .map(|k| (-(k * k) as f64 / (2.0 * sigma_cells * sigma_cells)).exp())
        .collect();
    let total: f64 = taps.iter().sum();
    taps.into_iter().map(|w| w / total).collect()
}

/// Half-sample mirror: `... 1 0 | 0 1 2 ... n-1 | n-1 n-2 ...`.
pub(crate) fn reflect(index: i64, n: usize) -> usize {
    let n = n as i64;
    let m = index.rem_euclid(2 * n);
    (if m < n { m } else { 2 * n - 1 - m }) as usize
}

pub struct GridBayesEngine {
    config: GridBayesConfig,
    geometry: GridGeometry,
    kernel: Vec<f64>,
    mass: Vec<f64>,
    clock: StreamClock,
    /// Time of the last diffusion tick applied.
    filter_time: f64,
    pending: Vec<Observation>,
}

impl GridBayesEngine {
    pub fn new(config: GridBayesConfig, area: Area) -> Result<Self, FusionError> {
        config.validate()?;
        let geometry =
            GridGeometry::covering(area, config.cell_size_m).map_err(|e| FusionError::Config(e.to_string()))?;
        Ok(Self::with_geometry(config, geometry))
    }

    pub fn with_geometry(config: GridBayesConfig, geometry: GridGeometry) -> Self {
        let kernel = gaussian_kernel(config.kernel_sigma_cells());
        let n = geometry.len();
        Self {
            config,
            geometry,
            kernel,
            mass: vec![1.0 / n as f64; n],
            clock: StreamClock::default(),
            filter_time: 0.0,
            pending: Vec::new(),
        }
    }

    pub fn geometry(&self) -> GridGeometry {
        self.geometry
    }

    pub fn distribution(&self) -> StrengthDistribution {
        StrengthDistribution {
            geometry: self.geometry,
            values: self.mass.clone(),
            normalized: true,
        }
    }

    fn renormalize(&mut self) -> Result<(), FusionError> {
        let total: f64 = self.mass.iter().sum();
        if total == 0.0 || !total.is_finite() {
            return Err(FusionError::ZeroMass);
        }
        for m in &mut self.mass {
            *m /= total;
        }
        Ok(())
    }

    /// One diffusion tick.
    pub fn predict(&mut self) -> Result<(), FusionError> {
        let (cols, rows) = (self.geometry.cols, self.geometry.rows);
        let radius = (self.kernel.len() / 2) as i64;
        if radius > 0 {
            let mut tmp = vec![0.0; self.mass.len()];
            for r in 0..rows {
                for c in 0..cols {
                    tmp[r * cols + c] = self
                        .kernel
                        .iter()
                        .enumerate()
                        .map(|(k, w)| w * self.mass[r * cols + reflect(c as i64 + k as i64 - radius, cols)])
                        .sum();
                }
            }
            for r in 0..rows {
                for c in 0..cols {
                    self.mass[r * cols + c] = self
                        .kernel
                        .iter()
                        .enumerate()
                        .map(|(k, w)| w * tmp[reflect(r as i64 + k as i64 - radius, rows) * cols + c])
                        .sum();
                }
            }
        }
        let alpha = self.config.forgetting;
        if alpha > 0.0 {
            let share = alpha / self.mass.len() as f64;
            for m in &mut self.mass {
                *m = (1.0 - alpha) * *m + share;
            }
        }
        self.renormalize()
    }

    /// Multiplies in the likelihood of one report.
    pub fn update(&mut self, obs: &Observation) -> Result<(), FusionError> {
        let two_var = 2.0 * self.config.position_sigma_m * self.config.position_sigma_m;
        for (i, m) in self.mass.iter_mut().enumerate() {
            let d = self.geometry.center(i).distance(&obs.position);
            *m *= self.config.likelihood_floor + (-(d * d) / two_var).exp();
        }
        self.renormalize()
    }

    fn advance_to(&mut self, t: f64) -> Result<(), FusionError> {
        while self.filter_time + self.config.tick_s <= t {
            self.filter_time += self.config.tick_s;
            self.predict()?;
        }
        Ok(())
    }

    /// Processes buffered reports up to `t`, interleaving diffusion ticks.
    pub fn grid_bayes_predict_update(&mut self, t: f64) -> Result<EstimateSnapshot, FusionError> {
        let due = self.pending.partition_point(|o| o.time_s <= t);
        let ready: Vec<Observation> = self.pending.drain(..due).collect();
        for obs in &ready {
            self.advance_to(obs.time_s)?;
            self.update(obs)?;
        }
        self.advance_to(t)?;
        Ok(EstimateSnapshot {
            time_s: t,
            locations: self.local_maxima(),
            grid: Some(self.distribution()),
        })
    }

    fn local_maxima(&self) -> Vec<EstimatedLocation> {
        let (cols, rows) = (self.geometry.cols as i64, self.geometry.rows as i64);
        // Rounding-level excess over the mean is not a peak.
        let mean = (1.0 + 1e-9) / self.mass.len() as f64;
        let at = |r: i64, c: i64| self.mass[(r * cols + c) as usize];
        let mut peaks: Vec<(usize, f64)> = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                let m = at(r, c);
                if m <= mean {
                    continue;
                }
                let is_max = (-1..=1).all(|dr| {
                    (-1..=1).all(|dc| {
                        let (rr, cc) = (r + dr, c + dc);
                        (dr == 0 && dc == 0) || rr < 0 || cc < 0 || rr >= rows || cc >= cols || at(rr, cc) <= m
                    })
                });
                if is_max {
                    peaks.push(((r * cols + c) as usize, m));
                }
            }
        }
        peaks.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        let mut kept: Vec<(usize, f64)> = Vec::new();
        for (i, m) in peaks {
            let (r, c) = ((i as i64) / cols, (i as i64) % cols);
            let near = kept.iter().any(|(j, _)| {
                let (rj, cj) = ((*j as i64) / cols, (*j as i64) % cols);
                (r - rj).abs() <= 1 && (c - cj).abs() <= 1
            });
            if !near {
                kept.push((i, m));
            }
        }
        kept.into_iter()
            .map(|(i, m)| EstimatedLocation {
                position: self.geometry.center(i),
                strength: m * self.config.assumed_total_strength,
            })
            .collect()
    }
}

impl FusionEngine for GridBayesEngine {
    fn name(&self) -> &str {
        "grid_bayes"
    }

    fn update_cadence_s(&self) -> f64 {
        self.config.tick_s
    }

    fn ingest(&mut self, observation: &Observation) -> Result<(), FusionError> {
        self.clock.admit(observation.time_s)?;
        self.pending.push(*observation);
        Ok(())
    }

    fn estimate(&mut self, t: f64) -> Result<EstimateSnapshot, FusionError> {
        self.clock.check_estimate(t)?;
        self.grid_bayes_predict_update(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Point;

    fn obs(t: f64, x: f64, y: f64) -> Observation {
        Observation {
            time_s: t,
            position: Point::new(x, y),
            strength: 3,
        }
    }

    #[test]
    fn reflect_indices() {
        let v: Vec<usize> = (-3..8).map(|i| reflect(i, 4)).collect();
        assert_eq!(v, vec![2, 1, 0, 0, 1, 2, 3, 3, 2, 1, 0]);
        assert_eq!(reflect(-1, 1), 0);
        assert_eq!(reflect(17, 1), 0);
    }

    #[test]
    fn uniform_prior_is_a_fixed_point_of_diffusion() {
        for scale in [0.0, 0.5, 1.0, 4.0] {
            let config = GridBayesConfig {
                diffusion_scale: scale,
                ..GridBayesConfig::default()
            };
            let mut f = GridBayesEngine::new(config, Area::new(2000.0, 1500.0)).unwrap();
            let s = f.estimate(3600.0).unwrap();
            let n = f.geometry().len() as f64;
            assert!(s.grid.unwrap().values.iter().all(|v| (v * n - 1.0).abs() < 1e-12));
            assert!(s.locations.is_empty());
        }
    }

    #[test]
    fn diffusion_conserves_mass_from_a_corner() {
        let mut f = GridBayesEngine::new(GridBayesConfig { forgetting: 0.0, ..Default::default() }, Area::new(500.0, 500.0)).unwrap();
        f.mass.iter_mut().for_each(|m| *m = 0.0);
        f.mass[0] = 1.0;
        let before = f.mass.clone();
        f.predict().unwrap();
        assert_ne!(before, f.mass);
        assert!((f.mass.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mass_sums_to_one_after_updates() {
        let mut f = GridBayesEngine::new(GridBayesConfig::default(), Area::new(2000.0, 2000.0)).unwrap();
        for i in 0..50 {
            f.ingest(&obs(i as f64 * 30.0, 100.0 + i as f64 * 20.0, 1900.0 - i as f64 * 15.0)).unwrap();
            let s = f.estimate(i as f64 * 30.0).unwrap();
            assert!((s.grid.unwrap().total() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn report_produces_a_peak_near_it() {
        let mut f = GridBayesEngine::new(GridBayesConfig::default(), Area::new(2000.0, 2000.0)).unwrap();
        f.ingest(&obs(0.0, 1010.0, 480.0)).unwrap();
        let s = f.estimate(0.0).unwrap();
        assert_eq!(s.locations.len(), 1);
        assert!(s.locations[0].position.distance(&Point::new(1010.0, 480.0)) < 50.0);
    }

    #[test]
    fn underflow_is_reported() {
        let config = GridBayesConfig {
            likelihood_floor: 0.0,
            position_sigma_m: 1e-3,
            ..Default::default()
        };
        let mut f = GridBayesEngine::new(config, Area::new(200.0, 200.0)).unwrap();
        f.ingest(&obs(0.0, 25.0, 25.0)).unwrap();
        f.ingest(&obs(0.0, 175.0, 175.0)).unwrap();
        assert_eq!(f.estimate(0.0).unwrap_err(), FusionError::ZeroMass);
    }

    #[test]
    fn polling_pattern_does_not_change_result() {
        let stream: Vec<_> = (0..30).map(|i| obs(i as f64 * 45.0, (i * 131 % 2000) as f64, (i * 71 % 2000) as f64)).collect();
        let mut a = GridBayesEngine::new(GridBayesConfig::default(), Area::new(2000.0, 2000.0)).unwrap();
        let mut b = GridBayesEngine::new(GridBayesConfig::default(), Area::new(2000.0, 2000.0)).unwrap();
        for o in &stream {
            a.ingest(o).unwrap();
            a.estimate(o.time_s).unwrap();
            b.ingest(o).unwrap();
        }
        assert_eq!(a.estimate(1800.0).unwrap(), b.estimate(1800.0).unwrap());
    }
}
