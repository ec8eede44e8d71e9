use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{CampaignConfig, RunError, TICK_S};
use crate::csvlog;
use crate::fusion::log::{snapshot_rows, EstimateRow};
use crate::fusion::{FusionEngine, Observation};
use crate::metrics::{metric_series, MetricRow, SeriesPoint};
use crate::rng::{Purpose, SeedStreams};
use crate::worldsim::log::{ground_truth_rows, GroundTruthRow, ReportRow};
use crate::worldsim::{apply_attrition, apply_deception, init_world, initial_intel, observe, step_world};

pub const ENGINE_F: &str = "F";
pub const ENGINE_G: &str = "G";

/// Pipeline stage named in run diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Setup,
    StepWorld,
    Attrition,
    Deception,
    InitialIntel,
    Observe,
    IngestF,
    IngestG,
    EstimateF,
    EstimateG,
    Metrics,
    WriteLogs,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Stage::Setup => "setup",
            Stage::StepWorld => "step_world",
            Stage::Attrition => "attrition",
            Stage::Deception => "deception",
            Stage::InitialIntel => "initial_intel",
            Stage::Observe => "observe",
            Stage::IngestF => "ingest(F)",
            Stage::IngestG => "ingest(G)",
            Stage::EstimateF => "estimate(F)",
            Stage::EstimateG => "estimate(G)",
            Stage::Metrics => "metrics",
            Stage::WriteLogs => "write_logs",
        };
        f.write_str(s)
    }
}

/// One metric series of one engine in one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSeries {
    pub engine: String,
    pub metric: String,
    pub points: Vec<SeriesPoint>,
}

/// SHA-256 of everything an engine ingested, in order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestDigests {
    pub f: String,
    pub g: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunArtifacts {
    pub run_index: u32,
    pub seed: u64,
    pub dir: PathBuf,
    pub ground_truth: PathBuf,
    pub reports: PathBuf,
    pub estimates_f: PathBuf,
    pub estimates_g: PathBuf,
    pub metrics: PathBuf,
    pub digests_file: PathBuf,
    pub digests: IngestDigests,
    pub series: Vec<RunSeries>,
}

impl RunArtifacts {
    pub fn series(&self, engine: &str, metric: &str) -> Option<&RunSeries> {
        self.series.iter().find(|s| s.engine == engine && s.metric == metric)
    }
}

/// `ingest_digests.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DigestRow {
    pub engine: String,
    pub sha256: String,
}

pub fn run_dir_name(run_index: u32) -> String {
    format!("run_{run_index:04}")
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Feeds an engine and hashes exactly what it was given.
struct Feed {
    engine: Box<dyn FusionEngine>,
    hasher: Sha256,
    cadence_s: f64,
    rows: Vec<EstimateRow>,
    label: &'static str,
}

impl Feed {
    fn ingest(&mut self, obs: &Observation) -> Result<(), String> {
        self.hasher.update(obs.time_s.to_le_bytes());
        self.hasher.update(obs.position.x.to_le_bytes());
        self.hasher.update(obs.position.y.to_le_bytes());
        self.hasher.update(obs.strength.to_le_bytes());
        self.engine.ingest(obs).map_err(|e| e.to_string())
    }

    fn on_cadence(&self, t: f64) -> bool {
        let k = t / self.cadence_s;
        (k - k.round()).abs() < 1e-9
    }

    fn snapshot(&mut self, t: f64) -> Result<(), String> {
        let snap = self.engine.estimate(t).map_err(|e| e.to_string())?;
        self.rows.extend(snapshot_rows(self.label, &snap));
        Ok(())
    }
}

/// Everything a run produced, before it is written out.
#[derive(Debug, Clone, PartialEq)]
pub struct RunLogs {
    pub ground_truth: Vec<GroundTruthRow>,
    pub reports: Vec<ReportRow>,
    pub estimates_f: Vec<EstimateRow>,
    pub estimates_g: Vec<EstimateRow>,
    pub digests: IngestDigests,
}

/// Simulates one paired run in memory.
///
/// Each 60 s tick: step the world (from the second tick on), apply the
/// deceiver, observe if the tick opens an observation window (plus initial
/// intelligence at t = 0), hand the identical observations to both engines,
/// then snapshot each engine whose cadence falls on the tick.
pub fn simulate_run(config: &CampaignConfig, run_index: u32) -> Result<RunLogs, RunError> {
    let seed = config.run_seed(run_index);
    let err = |tick: u64, stage: Stage, reason: String| RunError::Stage {
        run_index,
        tick,
        time_s: tick as f64 * TICK_S,
        stage,
        reason,
    };
    let scenario = Arc::new(config.scenario.clone());
    let area = scenario.area();
    let streams = SeedStreams::new(seed);
    let build = |spec: &crate::fusion::EngineSpec, label: &'static str, stage: Stage| {
        let engine = spec.build(area, seed).map_err(|e| err(0, stage, e.to_string()))?;
        Ok::<_, RunError>(Feed {
            cadence_s: engine.update_cadence_s(),
            engine,
            hasher: Sha256::new(),
            rows: Vec::new(),
            label,
        })
    };
    let mut f = build(&config.engine_f, ENGINE_F, Stage::Setup)?;
    let mut g = build(&config.engine_g, ENGINE_G, Stage::Setup)?;

    let mut state = init_world(scenario.clone(), &mut streams.substream(Purpose::Placement, 0));
    let n_ticks = (scenario.duration_s / TICK_S + 1e-9).floor() as u64;
    let period = scenario.observer.report_period_s;
    let mut ground_truth = Vec::new();
    let mut reports = Vec::new();

    for k in 0..=n_ticks {
        let t = k as f64 * TICK_S;
        if k > 0 {
            state = step_world(&state, TICK_S).map_err(|e| err(k, Stage::StepWorld, e.to_string()))?;
            if scenario.attrition_rate_per_s > 0.0 {
                apply_attrition(
                    &mut state,
                    scenario.attrition_rate_per_s,
                    TICK_S,
                    &mut streams.substream(Purpose::Attrition, k),
                );
            }
        }
        let view = apply_deception(&state, &scenario.deception, &mut streams.substream(Purpose::Deception, k));
        ground_truth.extend(ground_truth_rows(&view));

        let mut tick_reports = Vec::new();
        if k == 0 {
            tick_reports = initial_intel(&scenario, &state, &mut streams.substream(Purpose::InitialIntel, 0))
                .map_err(|e| err(k, Stage::InitialIntel, e.to_string()))?;
        }
        let w = t / period;
        if (w - w.round()).abs() < 1e-9 {
            let observers = state.blue_positions();
            tick_reports.extend(observe(
                &view,
                &scenario.observer,
                &observers,
                t,
                &mut streams.substream(Purpose::Observation, k),
            ));
        }

        for r in &tick_reports {
            let obs = r.observation();
            f.ingest(&obs).map_err(|e| err(k, Stage::IngestF, e))?;
            g.ingest(&obs).map_err(|e| err(k, Stage::IngestG, e))?;
        }
        reports.extend(tick_reports.iter().map(ReportRow::from));

        if f.on_cadence(t) {
            f.snapshot(t).map_err(|e| err(k, Stage::EstimateF, e))?;
        }
        if g.on_cadence(t) {
            g.snapshot(t).map_err(|e| err(k, Stage::EstimateG, e))?;
        }
    }

    Ok(RunLogs {
        ground_truth,
        reports,
        digests: IngestDigests {
            f: hex(&f.hasher.finalize()),
            g: hex(&g.hasher.finalize()),
        },
        estimates_f: f.rows,
        estimates_g: g.rows,
    })
}

/// Computes every configured metric series for both engines.
pub fn run_series(config: &CampaignConfig, logs: &RunLogs, run_index: u32) -> Result<Vec<RunSeries>, RunError> {
    let geometry = config.geometry().map_err(|e| RunError::Stage {
        run_index,
        tick: 0,
        time_s: 0.0,
        stage: Stage::Metrics,
        reason: e.to_string(),
    })?;
    let mut out = Vec::new();
    for spec in &config.metrics {
        for (engine, rows) in [(ENGINE_F, &logs.estimates_f), (ENGINE_G, &logs.estimates_g)] {
            let points = metric_series(&logs.ground_truth, rows, spec, geometry, TICK_S, config.empty_estimate)
                .map_err(|e| {
                    let time_s = match e {
                        crate::metrics::MetricError::EmptyEstimate(t)
                        | crate::metrics::MetricError::EmptyGroundTruth(t) => t,
                        _ => 0.0,
                    };
                    RunError::Stage {
                        run_index,
                        tick: (time_s / TICK_S).round() as u64,
                        time_s,
                        stage: Stage::Metrics,
                        reason: format!("{engine} {spec}: {e}"),
                    }
                })?;
            out.push(RunSeries {
                engine: engine.to_string(),
                metric: spec.to_string(),
                points,
            });
        }
    }
    Ok(out)
}

fn write<T: Serialize>(path: &Path, rows: impl IntoIterator<Item = T>, run_index: u32) -> Result<(), RunError> {
    csvlog::write_file(path, rows).map_err(|e| RunError::Stage {
        run_index,
        tick: 0,
        time_s: 0.0,
        stage: Stage::WriteLogs,
        reason: format!("{}: {e}", path.display()),
    })
}

/// Runs one paired simulation and writes its logs under
/// `<out_dir>/runs/run_NNNN/`.
pub fn run_one(config: &CampaignConfig, run_index: u32, out_dir: &Path) -> Result<RunArtifacts, RunError> {
    let logs = simulate_run(config, run_index)?;
    let series = run_series(config, &logs, run_index)?;

    let rel = PathBuf::from("runs").join(run_dir_name(run_index));
    let dir = out_dir.join(&rel);
    std::fs::create_dir_all(&dir).map_err(|e| RunError::Stage {
        run_index,
        tick: 0,
        time_s: 0.0,
        stage: Stage::WriteLogs,
        reason: format!("{}: {e}", dir.display()),
    })?;
    let art = RunArtifacts {
        run_index,
        seed: config.run_seed(run_index),
        ground_truth: dir.join("ground_truth.csv"),
        reports: dir.join("reports.csv"),
        estimates_f: dir.join("estimates_F.csv"),
        estimates_g: dir.join("estimates_G.csv"),
        metrics: dir.join("metrics.csv"),
        digests_file: dir.join("ingest_digests.csv"),
        dir,
        digests: logs.digests.clone(),
        series,
    };
    write(&art.ground_truth, &logs.ground_truth, run_index)?;
    write(&art.reports, &logs.reports, run_index)?;
    write(&art.estimates_f, &logs.estimates_f, run_index)?;
    write(&art.estimates_g, &logs.estimates_g, run_index)?;
    write(
        &art.digests_file,
        [
            DigestRow {
                engine: ENGINE_F.into(),
                sha256: logs.digests.f.clone(),
            },
            DigestRow {
                engine: ENGINE_G.into(),
                sha256: logs.digests.g.clone(),
            },
        ],
        run_index,
    )?;
    let metric_rows = art.series.iter().flat_map(|s| {
        s.points.iter().map(move |p| MetricRow {
            time_s: p.time_s,
            engine: s.engine.clone(),
            metric: s.metric.clone(),
            value: p.value,
        })
    });
    write(&art.metrics, metric_rows, run_index)?;
    Ok(art)
}
