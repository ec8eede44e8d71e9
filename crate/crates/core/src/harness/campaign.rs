use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::run::{run_dir_name, run_one, RunArtifacts, RunSeries, ENGINE_F, ENGINE_G};
use super::{CampaignConfig, CampaignError, ReportConfig};
use crate::analysis::{ecdf, exceedance_read, quantile_read};
use crate::validation::{
    type1_validate, type2_validate, PairedError, SampleTag, Type1Params, Type2Params, ValidationError,
    ValidationVerdict,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailedRun {
    pub run_index: u32,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub run_index: u32,
    pub seed: u64,
    /// Relative to the campaign output directory.
    pub dir: String,
    pub stream_digest_f: String,
    pub stream_digest_g: String,
    pub series: Vec<RunSeries>,
    /// Median of the primary metric over the run's ticks.
    pub median_f: f64,
    pub median_g: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledVerdict {
    pub label: String,
    pub metric: String,
    pub verdict: ValidationVerdict,
}

/// Ensemble medians of the primary metric early and late in the run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuarterTrend {
    pub engine: String,
    /// Ticks with `t <= duration / 4`.
    pub first_quarter_median: f64,
    /// Ticks with `t >= 3 * duration / 4`.
    pub final_quarter_median: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EcdfReads {
    pub engine: String,
    pub q: f64,
    pub quantile: f64,
    pub x: f64,
    pub exceedance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignSummary {
    pub n_runs: u32,
    pub base_seed: u64,
    pub engine_f: String,
    pub engine_g: String,
    pub primary_metric: String,
    pub metrics: Vec<String>,
    pub duration_s: f64,
    pub report: ReportConfig,
    pub runs: Vec<RunSummary>,
    pub failed: Vec<FailedRun>,
    pub verdicts: Vec<LabeledVerdict>,
    pub trend: Vec<QuarterTrend>,
    pub reads: Vec<EcdfReads>,
}

impl CampaignSummary {
    /// All `(time, value)` samples of one engine and metric across runs.
    pub fn samples(&self, engine: &str, metric: &str) -> Vec<(f64, f64)> {
        self.runs
            .iter()
            .filter_map(|r| r.series.iter().find(|s| s.engine == engine && s.metric == metric))
            .flat_map(|s| s.points.iter().map(|p| (p.time_s, p.value)))
            .collect()
    }

    pub fn verdict(&self, label: &str) -> Option<&ValidationVerdict> {
        self.verdicts.iter().find(|v| v.label == label).map(|v| &v.verdict)
    }
}

pub(crate) fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    crate::analysis::median_in_place(&mut v)
}

fn series_of<'a>(series: &'a [RunSeries], engine: &str, metric: &str) -> Option<&'a RunSeries> {
    series.iter().find(|s| s.engine == engine && s.metric == metric)
}

/// Type-2 pairs of one run, tagged with each engine's ingest digest.
pub fn paired_errors(run: &RunSummary, metric: &str) -> Vec<PairedError> {
    let (Some(f), Some(g)) = (series_of(&run.series, ENGINE_F, metric), series_of(&run.series, ENGINE_G, metric))
    else {
        return Vec::new();
    };
    f.points
        .iter()
        .zip(&g.points)
        .map(|(pf, pg)| PairedError {
            f_tag: SampleTag {
                run_index: run.run_index,
                stream_digest: run.stream_digest_f.clone(),
                time_s: pf.time_s,
            },
            g_tag: SampleTag {
                run_index: run.run_index,
                stream_digest: run.stream_digest_g.clone(),
                time_s: pg.time_s,
            },
            e_f: pf.value,
            e_g: pg.value,
        })
        .collect()
}

/// Verdicts over the pooled tick samples: Type-1 for each engine on the
/// primary metric, Type-2 on every metric.
pub fn campaign_verdicts(
    runs: &[RunSummary],
    metrics: &[String],
    type1: Option<&Type1Params>,
    type2: Option<&Type2Params>,
) -> Result<Vec<LabeledVerdict>, ValidationError> {
    let mut out = Vec::new();
    let primary = &metrics[0];
    if let Some(p) = type1 {
        for engine in [ENGINE_F, ENGINE_G] {
            let errors: Vec<f64> = runs
                .iter()
                .filter_map(|r| series_of(&r.series, engine, primary))
                .flat_map(|s| s.points.iter().map(|p| p.value))
                .collect();
            out.push(LabeledVerdict {
                label: format!("type1_{engine}"),
                metric: primary.clone(),
                verdict: type1_validate(&errors, p)?,
            });
        }
    }
    if let Some(p) = type2 {
        for metric in metrics {
            let pairs: Vec<PairedError> = runs.iter().flat_map(|r| paired_errors(r, metric)).collect();
            out.push(LabeledVerdict {
                label: format!("type2_{metric}"),
                metric: metric.clone(),
                verdict: type2_validate(&pairs, p)?,
            });
        }
    }
    Ok(out)
}

pub(crate) fn summarize_run(art: &RunArtifacts, primary: &str) -> RunSummary {
    let values = |engine: &str| -> Vec<f64> {
        art.series(engine, primary)
            .map(|s| s.points.iter().map(|p| p.value).collect())
            .unwrap_or_default()
    };
    RunSummary {
        run_index: art.run_index,
        seed: art.seed,
        dir: format!("runs/{}", run_dir_name(art.run_index)),
        stream_digest_f: art.digests.f.clone(),
        stream_digest_g: art.digests.g.clone(),
        median_f: median(&values(ENGINE_F)),
        median_g: median(&values(ENGINE_G)),
        series: art.series.clone(),
    }
}

/// Assembles the summary from completed and failed runs.
pub fn summarize(
    config: &CampaignConfig,
    runs: Vec<RunSummary>,
    failed: Vec<FailedRun>,
) -> Result<CampaignSummary, CampaignError> {
    let metrics: Vec<String> = config.metrics.iter().map(|m| m.to_string()).collect();
    let primary = metrics[0].clone();
    let duration = config.scenario.duration_s;
    let verdicts = if runs.is_empty() {
        Vec::new()
    } else {
        campaign_verdicts(&runs, &metrics, config.type1.as_ref(), config.type2.as_ref())?
    };

    let mut trend = Vec::new();
    let mut reads = Vec::new();
    for engine in [ENGINE_F, ENGINE_G] {
        let samples: Vec<(f64, f64)> = runs
            .iter()
            .filter_map(|r| series_of(&r.series, engine, &primary))
            .flat_map(|s| s.points.iter().map(|p| (p.time_s, p.value)))
            .collect();
        if samples.is_empty() {
            continue;
        }
        let early: Vec<f64> = samples.iter().filter(|p| p.0 <= duration / 4.0).map(|p| p.1).collect();
        let late: Vec<f64> = samples.iter().filter(|p| p.0 >= 0.75 * duration).map(|p| p.1).collect();
        trend.push(QuarterTrend {
            engine: engine.to_string(),
            first_quarter_median: median(&early),
            final_quarter_median: median(&late),
        });
        let values: Vec<f64> = samples.iter().map(|p| p.1).collect();
        let e = ecdf(&values).map_err(|e| CampaignError::Analysis(e.to_string()))?;
        reads.push(EcdfReads {
            engine: engine.to_string(),
            q: config.report.quantile_q,
            quantile: quantile_read(&e, config.report.quantile_q),
            x: config.report.exceedance_x,
            exceedance: exceedance_read(&e, config.report.exceedance_x),
        });
    }

    Ok(CampaignSummary {
        n_runs: config.n_runs,
        base_seed: config.base_seed,
        engine_f: config.engine_f.kind_name().to_string(),
        engine_g: config.engine_g.kind_name().to_string(),
        primary_metric: primary,
        metrics,
        duration_s: duration,
        report: config.report.clone(),
        runs,
        failed,
        verdicts,
        trend,
        reads,
    })
}

/// Runs the campaign in parallel and writes `summary.json` into `out_dir`.
///
/// Failed runs are recorded and excluded; more than 10% failures fails the
/// campaign.
pub fn run_campaign(config: &CampaignConfig, out_dir: &Path) -> Result<CampaignSummary, CampaignError> {
    config.validate()?;
    let primary = config.primary_metric().to_string();
    let results: Vec<Result<RunArtifacts, _>> =
        (0..config.n_runs).into_par_iter().map(|i| run_one(config, i, out_dir)).collect();
    let mut runs = Vec::new();
    let mut failed = Vec::new();
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok(art) => runs.push(summarize_run(&art, &primary)),
            Err(e) => failed.push(FailedRun {
                run_index: i as u32,
                error: e.to_string(),
            }),
        }
    }
    if failed.len() * 10 > config.n_runs as usize {
        return Err(CampaignError::FailureBudget {
            failed: failed.len(),
            n_runs: config.n_runs,
            first: failed[0].error.clone(),
        });
    }
    let summary = summarize(config, runs, failed)?;
    write_summary(&summary, &out_dir.join("summary.json"))?;
    Ok(summary)
}

pub fn write_summary(summary: &CampaignSummary, path: &Path) -> Result<(), CampaignError> {
    let mut text = serde_json::to_string_pretty(summary).map_err(|e| CampaignError::Io(e.to_string()))?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| CampaignError::Io(format!("{}: {e}", path.display())))
}

pub fn read_summary(path: &Path) -> Result<CampaignSummary, CampaignError> {
    let text = std::fs::read_to_string(path).map_err(|e| CampaignError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CampaignError::Io(format!("{}: {e}", path.display())))
}
