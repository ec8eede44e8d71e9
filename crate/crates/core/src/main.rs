use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use fusval::csvlog;
use fusval::fusion::log::EstimateRow;
use fusval::harness::{
    campaign_verdicts, read_summary, report, run_campaign, run_one, verdict_table, CampaignConfig, CampaignError,
    DigestRow, RunSeries, RunSummary, ENGINE_F, ENGINE_G, TICK_S,
};
use fusval::metrics::{metric_series, MetricRow, MetricSpec, SeriesPoint};
use fusval::worldsim::log::GroundTruthRow;

#[derive(Parser)]
#[command(name = "fusval", version, about = "Paired validation runs for information-fusion engines")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MetricArg {
    Cep,
    L1,
    L2,
    Prohorov,
}

impl MetricArg {
    fn label(self) -> &'static str {
        match self {
            MetricArg::Cep => "cep",
            MetricArg::L1 => "l1",
            MetricArg::L2 => "l2",
            MetricArg::Prohorov => "prohorov",
        }
    }
}

#[derive(clap::Args)]
struct Common {
    /// Campaign config (TOML). Defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory; defaults to the config's output_dir.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run one paired simulation and write its logs.
    Simulate {
        #[command(flatten)]
        common: Common,
        /// Seed of the run (replaces base_seed).
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run N paired simulations, then write summary, verdicts and figures.
    Campaign {
        #[command(flatten)]
        common: Common,
        /// Base seed; run i uses seed + i.
        #[arg(long)]
        seed: Option<u64>,
        /// Number of paired runs.
        #[arg(long)]
        runs: Option<u32>,
        /// Primary metric.
        #[arg(long, value_enum)]
        metric: Option<MetricArg>,
        /// CEP coverage fraction.
        #[arg(long)]
        coverage: Option<f64>,
    },
    /// Recompute a metric series from a run directory's logs (CSV to stdout).
    Metric {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "cep")]
        metric: MetricArg,
        /// CEP coverage fraction.
        #[arg(long)]
        coverage: Option<f64>,
    },
    /// Recompute verdicts from the metrics.csv files of a campaign directory.
    Validate {
        #[command(flatten)]
        common: Common,
    },
    /// Write figures and the verdict table from a campaign's summary.json.
    Report {
        #[command(flatten)]
        common: Common,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl ToString) -> Self {
        Failure {
            code: 2,
            message: message.to_string(),
        }
    }
}

impl From<CampaignError> for Failure {
    fn from(e: CampaignError) -> Self {
        let code = match e {
            CampaignError::FailureBudget { .. } => 3,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn load_config(common: &Common) -> Result<CampaignConfig, Failure> {
    match &common.config {
        Some(p) => CampaignConfig::load(p).map_err(Failure::input),
        None => Ok(CampaignConfig::default()),
    }
}

fn out_dir(common: &Common, config: &CampaignConfig) -> PathBuf {
    common.out.clone().unwrap_or_else(|| config.output_dir.clone())
}

fn metric_spec(arg: MetricArg, coverage: Option<f64>, config: &CampaignConfig) -> Result<MetricSpec, Failure> {
    let base = config
        .metrics
        .iter()
        .find(|m| m.to_string() == arg.label())
        .copied()
        .unwrap_or_else(|| arg.label().parse().expect("known metric label"));
    Ok(match coverage {
        Some(c) if !(c > 0.0 && c <= 1.0) => return Err(Failure::input(format!("--coverage {c} is outside (0, 1]"))),
        Some(c) => base.with_coverage(c),
        None => base,
    })
}

fn read_csv<T: serde::de::DeserializeOwned>(path: &Path) -> Result<Vec<T>, Failure> {
    csvlog::read_file(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn simulate(common: Common, seed: Option<u64>) -> Result<(), Failure> {
    let mut config = load_config(&common)?;
    if let Some(s) = seed {
        config.base_seed = s;
    }
    let out = out_dir(&common, &config);
    let art = run_one(&config, 0, &out).map_err(|e| Failure {
        code: 3,
        message: e.to_string(),
    })?;
    println!("seed {}: logs in {}", art.seed, art.dir.display());
    for s in &art.series {
        let vals: Vec<f64> = s.points.iter().map(|p| p.value).collect();
        let mean = vals.iter().sum::<f64>() / vals.len() as f64;
        println!("  {} {}: {} ticks, mean {:.4}", s.engine, s.metric, vals.len(), mean);
    }
    Ok(())
}

fn campaign(
    common: Common,
    seed: Option<u64>,
    runs: Option<u32>,
    metric: Option<MetricArg>,
    coverage: Option<f64>,
) -> Result<(), Failure> {
    let mut config = load_config(&common)?;
    if let Some(s) = seed {
        config.base_seed = s;
    }
    if let Some(n) = runs {
        config.n_runs = n;
    }
    if let Some(c) = coverage {
        config.metrics = config.metrics.iter().map(|m| m.with_coverage(c)).collect();
    }
    if let Some(m) = metric {
        let spec = metric_spec(m, coverage, &config)?;
        config.metrics.retain(|x| x.to_string() != spec.to_string());
        config.metrics.insert(0, spec);
    }
    config.validate().map_err(Failure::input)?;
    let out = out_dir(&common, &config);
    std::fs::create_dir_all(&out).map_err(|e| Failure::input(format!("{}: {e}", out.display())))?;
    let summary = run_campaign(&config, &out)?;
    report(&summary, &out)?;
    print!("{}", verdict_table(&summary));
    Ok(())
}

fn metric(common: Common, arg: MetricArg, coverage: Option<f64>) -> Result<(), Failure> {
    let config = load_config(&common)?;
    let spec = metric_spec(arg, coverage, &config)?;
    let dir = common.out.clone().ok_or_else(|| Failure::input("--out must name a run directory"))?;
    let truth: Vec<GroundTruthRow> = read_csv(&dir.join("ground_truth.csv"))?;
    let geometry = config.geometry().map_err(Failure::input)?;
    let mut rows = Vec::new();
    for engine in [ENGINE_F, ENGINE_G] {
        let est: Vec<EstimateRow> = read_csv(&dir.join(format!("estimates_{engine}.csv")))?;
        let series = metric_series(&truth, &est, &spec, geometry, TICK_S, config.empty_estimate)
            .map_err(|e| Failure::input(format!("{engine}: {e}")))?;
        rows.extend(series.into_iter().map(|p| MetricRow {
            time_s: p.time_s,
            engine: engine.to_string(),
            metric: spec.to_string(),
            value: p.value,
        }));
    }
    csvlog::write_rows(std::io::stdout().lock(), rows).map_err(Failure::input)
}

/// Rebuilds per-run series from `runs/*/metrics.csv` and `ingest_digests.csv`.
fn load_runs(dir: &Path) -> Result<Vec<RunSummary>, Failure> {
    let runs_dir = dir.join("runs");
    let mut dirs: Vec<PathBuf> = std::fs::read_dir(&runs_dir)
        .map_err(|e| Failure::input(format!("{}: {e}", runs_dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.join("metrics.csv").is_file())
        .collect();
    dirs.sort();
    let mut out = Vec::new();
    for (i, d) in dirs.iter().enumerate() {
        let rows: Vec<MetricRow> = read_csv(&d.join("metrics.csv"))?;
        let digests: Vec<DigestRow> = read_csv(&d.join("ingest_digests.csv"))?;
        let digest = |engine: &str| {
            digests
                .iter()
                .find(|r| r.engine == engine)
                .map(|r| r.sha256.clone())
                .ok_or_else(|| Failure::input(format!("{}: no digest for {engine}", d.display())))
        };
        let mut grouped: BTreeMap<(String, String), Vec<SeriesPoint>> = BTreeMap::new();
        for r in rows {
            grouped.entry((r.engine, r.metric)).or_default().push(SeriesPoint {
                time_s: r.time_s,
                value: r.value,
                substituted: false,
            });
        }
        let run_index = d
            .file_name()
            .and_then(|n| n.to_str())
            .and_then(|n| n.strip_prefix("run_"))
            .and_then(|n| n.parse().ok())
            .unwrap_or(i as u32);
        out.push(RunSummary {
            run_index,
            seed: 0,
            dir: d.display().to_string(),
            stream_digest_f: digest(ENGINE_F)?,
            stream_digest_g: digest(ENGINE_G)?,
            series: grouped
                .into_iter()
                .map(|((engine, metric), points)| RunSeries { engine, metric, points })
                .collect(),
            median_f: f64::NAN,
            median_g: f64::NAN,
        });
    }
    if out.is_empty() {
        return Err(Failure::input(format!("no run directories with metrics.csv under {}", runs_dir.display())));
    }
    Ok(out)
}

fn validate(common: Common) -> Result<(), Failure> {
    let config = load_config(&common)?;
    let dir = out_dir(&common, &config);
    let runs = load_runs(&dir)?;
    let metrics: Vec<String> = config.metrics.iter().map(|m| m.to_string()).collect();
    if config.type1.is_none() && config.type2.is_none() {
        return Err(Failure::input("config has neither [type1] nor [type2] parameters"));
    }
    let verdicts = campaign_verdicts(&runs, &metrics, config.type1.as_ref(), config.type2.as_ref())
        .map_err(Failure::input)?;
    println!("{} runs from {}", runs.len(), dir.display());
    for v in &verdicts {
        println!("{:<16} {}", v.label, v.verdict);
    }
    Ok(())
}

fn report_cmd(common: Common) -> Result<(), Failure> {
    let dir = match &common.out {
        Some(d) => d.clone(),
        None => load_config(&common)?.output_dir,
    };
    let summary = read_summary(&dir.join("summary.json"))?;
    let files = report(&summary, &dir)?;
    println!("wrote {} and {}", files.trend_svg.display(), files.ecdf_svg.display());
    print!("{}", verdict_table(&summary));
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Simulate { common, seed } => simulate(common, seed),
        Command::Campaign {
            common,
            seed,
            runs,
            metric: m,
            coverage,
        } => campaign(common, seed, runs, m, coverage),
        Command::Metric {
            common,
            metric: m,
            coverage,
        } => metric(common, m, coverage),
        Command::Validate { common } => validate(common),
        Command::Report { common } => report_cmd(common),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
