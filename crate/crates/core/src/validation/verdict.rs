use std::fmt;

use serde::{Deserialize, Serialize};

use super::{wilson_interval, ValidationError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Type1Params {
    /// Largest acceptable error, in metric units.
    pub delta: f64,
    /// Smallest acceptable probability of staying under `delta`.
    pub theta: f64,
    #[serde(default = "default_confidence")]
    pub confidence: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TiePolicy {
    /// A tie is not a win.
    #[default]
    CountAgainst,
    /// A tie is worth half a win.
    HalfCredit,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Type2Params {
    pub vartheta: f64,
    #[serde(default = "default_confidence")]
    pub confidence: f64,
    #[serde(default)]
    pub tie_policy: TiePolicy,
}

fn default_confidence() -> f64 {
    0.95
}

fn check_open_unit(field: &'static str, v: f64) -> Result<(), ValidationError> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(ValidationError::InvalidParam {
            field,
            reason: format!("{v} is outside (0, 1)"),
        })
    }
}

impl Type1Params {
    pub fn validate(&self) -> Result<(), ValidationError> {
        if !(self.delta > 0.0) {
            return Err(ValidationError::InvalidParam {
                field: "delta",
                reason: format!("{} must be > 0", self.delta),
            });
        }
        check_open_unit("theta", self.theta)?;
        check_open_unit("confidence", self.confidence)
    }
}

impl Type2Params {
    pub fn validate(&self) -> Result<(), ValidationError> {
        check_open_unit("vartheta", self.vartheta)?;
        check_open_unit("confidence", self.confidence)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictKind {
    Type1,
    Type2,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationVerdict {
    pub kind: VerdictKind,
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub confidence: f64,
    pub threshold: f64,
    pub pass: bool,
    pub n_samples: usize,
    /// Type 2 only.
    pub tie_fraction: Option<f64>,
}

impl fmt::Display for ValidationVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let label = match self.kind {
            VerdictKind::Type1 => "Type-1",
            VerdictKind::Type2 => "Type-2",
        };
        write!(
            f,
            "{label}: {} (p_hat = {:.4}, {:.0}% CI [{:.4}, {:.4}], threshold {:.4}, n = {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.p_hat,
            self.confidence * 100.0,
            self.ci_low,
            self.ci_high,
            self.threshold,
            self.n_samples
        )?;
        if let Some(t) = self.tie_fraction {
            write!(f, ", ties {:.4}", t)?;
        }
        f.write_str(")")
    }
}

fn verdict(kind: VerdictKind, successes: f64, n: usize, confidence: f64, threshold: f64) -> ValidationVerdict {
    let (ci_low, ci_high) = wilson_interval(successes, n, confidence);
    ValidationVerdict {
        kind,
        p_hat: successes / n as f64,
        ci_low,
        ci_high,
        confidence,
        threshold,
        pass: ci_low > threshold,
        n_samples: n,
        tie_fraction: None,
    }
}

/// Counts errors strictly below `delta`; an error equal to `delta` fails.
pub fn type1_validate(errors: &[f64], params: &Type1Params) -> Result<ValidationVerdict, ValidationError> {
    params.validate()?;
    if errors.is_empty() {
        return Err(ValidationError::Empty);
    }
    let hits = errors.iter().filter(|e| **e < params.delta).count();
    Ok(verdict(VerdictKind::Type1, hits as f64, errors.len(), params.confidence, params.theta))
}

/// Identifies the run, report stream and tick a sample came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleTag {
    pub run_index: u32,
    /// Digest of the report stream the engine ingested.
    pub stream_digest: String,
    pub time_s: f64,
}

impl fmt::Display for SampleTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let short = &self.stream_digest[..self.stream_digest.len().min(12)];
        write!(f, "run {} stream {short} t={}", self.run_index, self.time_s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairedError {
    pub f_tag: SampleTag,
    pub g_tag: SampleTag,
    pub e_f: f64,
    pub e_g: f64,
}

impl PairedError {
    pub fn new(tag: SampleTag, e_f: f64, e_g: f64) -> Self {
        Self {
            f_tag: tag.clone(),
            g_tag: tag,
            e_f,
            e_g,
        }
    }
}

/// Counts samples where F's error is strictly below G's.
pub fn type2_validate(pairs: &[PairedError], params: &Type2Params) -> Result<ValidationVerdict, ValidationError> {
    params.validate()?;
    if pairs.is_empty() {
        return Err(ValidationError::Empty);
    }
    if let Some((index, p)) = pairs.iter().enumerate().find(|(_, p)| p.f_tag != p.g_tag) {
        return Err(ValidationError::Unpaired {
            index,
            f: p.f_tag.to_string(),
            g: p.g_tag.to_string(),
        });
    }
    let wins = pairs.iter().filter(|p| p.e_f < p.e_g).count() as f64;
    let ties = pairs.iter().filter(|p| p.e_f == p.e_g).count() as f64;
    let successes = match params.tie_policy {
        TiePolicy::CountAgainst => wins,
        TiePolicy::HalfCredit => wins + 0.5 * ties,
    };
    let n = pairs.len();
    let mut v = verdict(VerdictKind::Type2, successes, n, params.confidence, params.vartheta);
    v.tie_fraction = Some(ties / n as f64);
    Ok(v)
}
