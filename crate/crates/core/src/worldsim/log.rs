//! Ground-truth and report logs.
//!
//! ```text
//! ground_truth.csv: time_s,entity_id,side,x_m,y_m,strength,concealed
//! reports.csv:      time_s,x_m,y_m,strength,origin_kind
//! ```

use serde::{Deserialize, Serialize};

use super::{DeceivedView, Report, Side};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruthRow {
    pub time_s: f64,
    pub entity_id: u32,
    pub side: Side,
    pub x_m: f64,
    pub y_m: f64,
    pub strength: u32,
    pub concealed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub time_s: f64,
    pub x_m: f64,
    pub y_m: f64,
    pub strength: u32,
    pub origin_kind: String,
}

/// One row per real entity. Decoys are not part of the ground truth.
pub fn ground_truth_rows(view: &DeceivedView) -> impl Iterator<Item = GroundTruthRow> + '_ {
    view.state.entities.iter().map(move |e| GroundTruthRow {
        time_s: view.state.time_s,
        entity_id: e.id.0,
        side: e.side,
        x_m: e.position.x,
        y_m: e.position.y,
        strength: e.strength,
        concealed: e.concealed,
    })
}

impl From<&Report> for ReportRow {
    fn from(r: &Report) -> Self {
        Self {
            time_s: r.time_s,
            x_m: r.reported_position.x,
            y_m: r.reported_position.y,
            strength: r.reported_strength,
            origin_kind: r.origin.kind().to_string(),
        }
    }
}
