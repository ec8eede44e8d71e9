use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    Lowess,
    Ecdf,
}

/// Points with strictly increasing x.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    pub kind: CurveKind,
    pub points: Vec<(f64, f64)>,
    pub engine: String,
    pub metric: String,
}

impl Curve {
    pub fn labeled(mut self, engine: &str, metric: &str) -> Self {
        self.engine = engine.to_string();
        self.metric = metric.to_string();
        self
    }

    /// Linear interpolation, clamped to the end values outside the x range.
    pub fn value_at(&self, x: f64) -> Option<f64> {
        let pts = &self.points;
        let first = pts.first()?;
        let last = pts.last()?;
        if x <= first.0 {
            return Some(first.1);
        }
        if x >= last.0 {
            return Some(last.1);
        }
        let i = pts.partition_point(|p| p.0 <= x);
        let (a, b) = (pts[i - 1], pts[i]);
        Some(a.1 + (b.1 - a.1) * (x - a.0) / (b.0 - a.0))
    }
}

/// Curve CSV row: `x,y,series`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub x: f64,
    pub y: f64,
    pub series: String,
}

pub fn curve_rows<'a>(series: &'a str, points: &'a [(f64, f64)]) -> impl Iterator<Item = CurveRow> + 'a {
    points.iter().map(move |&(x, y)| CurveRow {
        x,
        y,
        series: series.to_string(),
    })
}
