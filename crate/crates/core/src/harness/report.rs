use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::campaign::CampaignSummary;
use super::run::{ENGINE_F, ENGINE_G};
use super::CampaignError;
use crate::analysis::svg::{render, Chart, Guide, Series, SeriesStyle};
use crate::analysis::{curve_rows, ecdf, exceedance_read, lowess, quantile_read, CurveRow};
use crate::csvlog;

#[derive(Debug, Clone, PartialEq)]
pub struct ReportFiles {
    pub trend_csv: PathBuf,
    pub trend_svg: PathBuf,
    pub ecdf_csv: PathBuf,
    pub ecdf_svg: PathBuf,
    pub verdicts_txt: PathBuf,
    pub verdicts_csv: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
struct VerdictRow<'a> {
    label: &'a str,
    metric: &'a str,
    kind: String,
    n_samples: usize,
    p_hat: f64,
    ci_low: f64,
    ci_high: f64,
    confidence: f64,
    threshold: f64,
    tie_fraction: Option<f64>,
    pass: bool,
}

fn io(path: &Path, e: impl std::fmt::Display) -> CampaignError {
    CampaignError::Io(format!("{}: {e}", path.display()))
}

fn write_text(path: &Path, text: &str) -> Result<(), CampaignError> {
    std::fs::write(path, text).map_err(|e| io(path, e))
}

fn unit(metric: &str) -> &'static str {
    if metric == "cep" {
        " (m)"
    } else {
        ""
    }
}

fn engine_label(summary: &CampaignSummary, engine: &str) -> String {
    let kind = if engine == ENGINE_F { &summary.engine_f } else { &summary.engine_g };
    format!("{engine} ({kind})")
}

/// Writes the trend figure, the ECDF figure and the verdict table into `out_dir`.
pub fn report(summary: &CampaignSummary, out_dir: &Path) -> Result<ReportFiles, CampaignError> {
    std::fs::create_dir_all(out_dir).map_err(|e| io(out_dir, e))?;
    let metric = summary.primary_metric.as_str();
    let files = ReportFiles {
        trend_csv: out_dir.join("trend.csv"),
        trend_svg: out_dir.join("trend.svg"),
        ecdf_csv: out_dir.join("ecdf.csv"),
        ecdf_svg: out_dir.join("ecdf.svg"),
        verdicts_txt: out_dir.join("verdicts.txt"),
        verdicts_csv: out_dir.join("verdicts.csv"),
    };

    let mut trend_rows: Vec<CurveRow> = Vec::new();
    let mut trend_chart = Chart {
        title: format!("{metric} error vs. time"),
        x_label: "time into run (s)".into(),
        y_label: format!("{metric}{}", unit(metric)),
        ..Chart::default()
    };
    let mut ecdf_rows: Vec<CurveRow> = Vec::new();
    let mut ecdf_chart = Chart {
        title: format!("cumulative probability of {metric}"),
        x_label: format!("{metric}{}", unit(metric)),
        y_label: "cumulative probability".into(),
        y_range: Some((0.0, 1.0)),
        ..Chart::default()
    };
    let q = summary.report.quantile_q;
    let x = summary.report.exceedance_x;

    for (color, engine) in [ENGINE_F, ENGINE_G].into_iter().enumerate() {
        let mut samples = summary.samples(engine, metric);
        if samples.is_empty() {
            continue;
        }
        samples.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        let label = engine_label(summary, engine);
        trend_rows.extend(curve_rows(&format!("{engine}_points"), &samples));
        trend_chart.series.push(Series {
            label: format!("{label} samples"),
            style: SeriesStyle::Scatter,
            points: samples.clone(),
            color,
        });
        if let Ok(curve) = lowess(&samples, summary.report.lowess) {
            trend_rows.extend(curve_rows(&format!("{engine}_lowess"), &curve.points));
            trend_chart.series.push(Series {
                label: format!("{label} lowess"),
                style: SeriesStyle::Line,
                points: curve.points,
                color,
            });
        }

        let values: Vec<f64> = samples.iter().map(|p| p.1).collect();
        let e = ecdf(&values).map_err(|e| CampaignError::Analysis(e.to_string()))?;
        let qr = quantile_read(&e, q);
        let xr = exceedance_read(&e, x);
        ecdf_rows.extend(curve_rows(engine, &e.curve().points));
        ecdf_chart.series.push(Series {
            label,
            style: SeriesStyle::Step,
            points: e.curve().points.clone(),
            color,
        });
        ecdf_chart.notes.push(format!("{engine}: {:.0}% at or below {qr:.2}", q * 100.0));
        ecdf_chart.notes.push(format!("{engine}: F({x}) = {xr:.3}"));
    }
    ecdf_chart.guides.push(Guide::Horizontal {
        y: q,
        text: format!("q = {q}"),
    });
    ecdf_chart.guides.push(Guide::Vertical {
        x,
        text: format!("x = {x}"),
    });

    csvlog::write_file(&files.trend_csv, &trend_rows).map_err(|e| io(&files.trend_csv, e))?;
    write_text(&files.trend_svg, &render(&trend_chart))?;
    csvlog::write_file(&files.ecdf_csv, &ecdf_rows).map_err(|e| io(&files.ecdf_csv, e))?;
    write_text(&files.ecdf_svg, &render(&ecdf_chart))?;

    let rows: Vec<VerdictRow> = summary
        .verdicts
        .iter()
        .map(|v| VerdictRow {
            label: &v.label,
            metric: &v.metric,
            kind: format!("{:?}", v.verdict.kind),
            n_samples: v.verdict.n_samples,
            p_hat: v.verdict.p_hat,
            ci_low: v.verdict.ci_low,
            ci_high: v.verdict.ci_high,
            confidence: v.verdict.confidence,
            threshold: v.verdict.threshold,
            tie_fraction: v.verdict.tie_fraction,
            pass: v.verdict.pass,
        })
        .collect();
    csvlog::write_file(&files.verdicts_csv, &rows).map_err(|e| io(&files.verdicts_csv, e))?;
    write_text(&files.verdicts_txt, &verdict_table(summary))?;
    Ok(files)
}

pub fn verdict_table(summary: &CampaignSummary) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "campaign: {} runs ({} completed, {} failed), base seed {}",
        summary.n_runs,
        summary.runs.len(),
        summary.failed.len(),
        summary.base_seed
    );
    let _ = writeln!(s, "F = {}, G = {}, primary metric {}", summary.engine_f, summary.engine_g, summary.primary_metric);
    let _ = writeln!(s);
    let _ = writeln!(s, "{:<16} {:<9} {:>7} {:>8} {:>19} {:>9} {:>6}", "verdict", "metric", "n", "p_hat", "CI", "threshold", "result");
    for v in &summary.verdicts {
        let d = &v.verdict;
        let _ = writeln!(
            s,
            "{:<16} {:<9} {:>7} {:>8.4} {:>19} {:>9} {:>6}",
            v.label,
            v.metric,
            d.n_samples,
            d.p_hat,
            format!("[{:.4}, {:.4}]", d.ci_low, d.ci_high),
            d.threshold,
            if d.pass { "PASS" } else { "FAIL" }
        );
    }
    if !summary.trend.is_empty() {
        let _ = writeln!(s);
        let _ = writeln!(s, "median {} by quarter of run time:", summary.primary_metric);
        for t in &summary.trend {
            let _ = writeln!(s, "  {}: first {:.4}, final {:.4}", t.engine, t.first_quarter_median, t.final_quarter_median);
        }
    }
    if !summary.reads.is_empty() {
        let _ = writeln!(s);
        for r in &summary.reads {
            let _ = writeln!(s, "  {}: quantile({}) = {:.4}, F({}) = {:.4}", r.engine, r.q, r.quantile, r.x, r.exceedance);
        }
    }
    for f in &summary.failed {
        let _ = writeln!(s, "failed run {}: {}", f.run_index, f.error);
    }
    s
}
