use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::ConfigError;
use crate::analysis::LowessParams;
use crate::fusion::{EngineSpec, GridBayesConfig, StaffSurrogateConfig};
use crate::metrics::{EmptyEstimatePolicy, GridGeometry, MetricSpec, DEFAULT_MAX_SUPPORT};
use crate::validation::{Type1Params, Type2Params};
use crate::worldsim::{load_scenario, Scenario};

/// Harness tick; every log has one entry per tick.
pub const TICK_S: f64 = 60.0;

/// Plot reads annotated on the ECDF figure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ReportConfig {
    pub quantile_q: f64,
    pub exceedance_x: f64,
    pub lowess: LowessParams,
}

impl Default for ReportConfig {
    fn default() -> Self {
        Self {
            quantile_q: 0.6,
            exceedance_x: 50.0,
            lowess: LowessParams::default(),
        }
    }
}

/// The on-disk form of a campaign config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CampaignFile {
    /// Scenario file, relative to the campaign file. Absent means defaults.
    #[serde(default)]
    scenario: Option<PathBuf>,
    #[serde(default = "one")]
    n_runs: u32,
    #[serde(default)]
    base_seed: u64,
    #[serde(default = "default_f")]
    engine_f: EngineSpec,
    #[serde(default = "default_g")]
    engine_g: EngineSpec,
    #[serde(default = "default_metrics")]
    metrics: Vec<String>,
    #[serde(default = "half")]
    cep_coverage: f64,
    #[serde(default = "default_max_support")]
    max_support: usize,
    #[serde(default = "default_cell")]
    metric_cell_m: f64,
    #[serde(default)]
    empty_estimate: EmptyEstimatePolicy,
    #[serde(default)]
    type1: Option<Type1Params>,
    #[serde(default)]
    type2: Option<Type2Params>,
    #[serde(default)]
    report: ReportConfig,
    #[serde(default = "default_out")]
    output_dir: PathBuf,
}

fn one() -> u32 {
    1
}
fn half() -> f64 {
    0.5
}
fn default_max_support() -> usize {
    DEFAULT_MAX_SUPPORT
}
fn default_cell() -> f64 {
    50.0
}
fn default_out() -> PathBuf {
    PathBuf::from("out")
}
fn default_f() -> EngineSpec {
    EngineSpec::GridBayes(GridBayesConfig::default())
}
fn default_g() -> EngineSpec {
    EngineSpec::StaffSurrogate(StaffSurrogateConfig::default())
}
fn default_metrics() -> Vec<String> {
    vec!["cep".into(), "l1".into()]
}

/// A resolved campaign: scenario loaded, metric names parsed.
#[derive(Debug, Clone, PartialEq)]
pub struct CampaignConfig {
    pub scenario: Scenario,
    pub n_runs: u32,
    /// Run `i` uses seed `base_seed + i`.
    pub base_seed: u64,
    pub engine_f: EngineSpec,
    pub engine_g: EngineSpec,
    /// The first entry is the primary metric used for Type-1 verdicts and figures.
    pub metrics: Vec<MetricSpec>,
    /// Cell size of the raster used by L_p and Prohorov.
    pub metric_cell_m: f64,
    pub empty_estimate: EmptyEstimatePolicy,
    pub type1: Option<Type1Params>,
    pub type2: Option<Type2Params>,
    pub report: ReportConfig,
    pub output_dir: PathBuf,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        Self::from_file(
            toml::from_str::<CampaignFile>("").expect("empty campaign file parses"),
            Scenario::default(),
        )
        .expect("defaults are valid")
    }
}

impl CampaignConfig {
    fn from_file(file: CampaignFile, scenario: Scenario) -> Result<Self, ConfigError> {
        if file.metrics.is_empty() {
            return Err(ConfigError::invalid("metrics", "at least one metric is required"));
        }
        if !(file.cep_coverage > 0.0 && file.cep_coverage <= 1.0) {
            return Err(ConfigError::invalid("cep_coverage", format!("{} is outside (0, 1]", file.cep_coverage)));
        }
        let metrics = file
            .metrics
            .iter()
            .map(|m| {
                m.parse::<MetricSpec>()
                    .map(|s| s.with_coverage(file.cep_coverage).with_max_support(file.max_support))
                    .map_err(|e| ConfigError::invalid("metrics", e.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let config = Self {
            scenario,
            n_runs: file.n_runs,
            base_seed: file.base_seed,
            engine_f: file.engine_f,
            engine_g: file.engine_g,
            metrics,
            metric_cell_m: file.metric_cell_m,
            empty_estimate: file.empty_estimate,
            type1: file.type1,
            type2: file.type2,
            report: file.report,
            output_dir: file.output_dir,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.scenario.validate().map_err(ConfigError::Scenario)?;
        if self.n_runs < 1 {
            return Err(ConfigError::invalid("n_runs", "must be >= 1"));
        }
        if self.metrics.is_empty() {
            return Err(ConfigError::invalid("metrics", "at least one metric is required"));
        }
        self.geometry()?;
        if let Some(t) = &self.type1 {
            t.validate().map_err(|e| ConfigError::invalid("type1", e.to_string()))?;
        }
        if let Some(t) = &self.type2 {
            t.validate().map_err(|e| ConfigError::invalid("type2", e.to_string()))?;
        }
        let q = self.report.quantile_q;
        if !(q > 0.0 && q <= 1.0) {
            return Err(ConfigError::invalid("report.quantile_q", format!("{q} is outside (0, 1]")));
        }
        let area = self.scenario.area();
        for (field, spec) in [("engine_f", &self.engine_f), ("engine_g", &self.engine_g)] {
            spec.build(area, 0).map_err(|e| ConfigError::invalid(field, e.to_string()))?;
        }
        Ok(())
    }

    pub fn primary_metric(&self) -> &MetricSpec {
        &self.metrics[0]
    }

    pub fn run_seed(&self, run_index: u32) -> u64 {
        self.base_seed.wrapping_add(run_index as u64)
    }

    pub fn geometry(&self) -> Result<GridGeometry, ConfigError> {
        GridGeometry::covering(self.scenario.area(), self.metric_cell_m)
            .map_err(|e| ConfigError::invalid("metric_cell_m", e.to_string()))
    }

    /// Parses campaign TOML. A relative `scenario` path is resolved against
    /// `base_dir`.
    pub fn parse(source: &str, base_dir: &Path) -> Result<Self, ConfigError> {
        let file: CampaignFile = toml::from_str(source).map_err(|e| ConfigError::Parse(e.to_string()))?;
        let scenario = match &file.scenario {
            Some(p) => {
                let path = base_dir.join(p);
                let text = std::fs::read_to_string(&path).map_err(|e| ConfigError::Io {
                    path: path.clone(),
                    reason: e.to_string(),
                })?;
                load_scenario(&text).map_err(ConfigError::Scenario)?
            }
            None => Scenario::default(),
        };
        Self::from_file(file, scenario)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
            path: path.to_path_buf(),
            reason: e.to_string(),
        })?;
        Self::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }
}
