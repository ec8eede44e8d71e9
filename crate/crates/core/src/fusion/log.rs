//! Estimate log: `time_s,engine,est_x_m,est_y_m,est_strength`.
//!
//! One row per estimated location per snapshot. A snapshot with no
//! locations is written as a single row with the three estimate fields
//! empty, so "no estimate yet" and "empty estimate" stay distinguishable.

use serde::{Deserialize, Serialize};

use super::{EstimateSnapshot, EstimatedLocation};
use crate::geom::Point;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateRow {
    pub time_s: f64,
    pub engine: String,
    pub est_x_m: Option<f64>,
    pub est_y_m: Option<f64>,
    pub est_strength: Option<f64>,
}

pub fn snapshot_rows(engine: &str, snapshot: &EstimateSnapshot) -> Vec<EstimateRow> {
    if snapshot.locations.is_empty() {
        return vec![EstimateRow {
            time_s: snapshot.time_s,
            engine: engine.to_string(),
            est_x_m: None,
            est_y_m: None,
            est_strength: None,
        }];
    }
    snapshot
        .locations
        .iter()
        .map(|l| EstimateRow {
            time_s: snapshot.time_s,
            engine: engine.to_string(),
            est_x_m: Some(l.position.x),
            est_y_m: Some(l.position.y),
            est_strength: Some(l.strength),
        })
        .collect()
}

/// Regroups time-ordered rows into snapshots (grid form is not logged).
pub fn snapshots_from_rows(rows: &[EstimateRow]) -> Vec<EstimateSnapshot> {
    let mut out: Vec<EstimateSnapshot> = Vec::new();
    for r in rows {
        if out.last().map(|s| s.time_s != r.time_s).unwrap_or(true) {
            out.push(EstimateSnapshot {
                time_s: r.time_s,
                locations: Vec::new(),
                grid: None,
            });
        }
        if let (Some(x), Some(y), Some(s)) = (r.est_x_m, r.est_y_m, r.est_strength) {
            out.last_mut().unwrap().locations.push(EstimatedLocation {
                position: Point::new(x, y),
                strength: s,
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csvlog::{read_rows, write_rows};

    #[test]
    fn empty_snapshot_roundtrips_as_blank_row() {
        let snaps = vec![
            EstimateSnapshot {
                time_s: 0.0,
                locations: vec![],
                grid: None,
            },
            EstimateSnapshot {
                time_s: 60.0,
                locations: vec![
                    EstimatedLocation {
                        position: Point::new(1.5, 2.0),
                        strength: 0.25,
                    },
                    EstimatedLocation {
                        position: Point::new(3.0, 4.0),
                        strength: 3.0,
                    },
                ],
                grid: None,
            },
        ];
        let rows: Vec<_> = snaps.iter().flat_map(|s| snapshot_rows("G", s)).collect();
        let mut buf = Vec::new();
        write_rows(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("time_s,engine,est_x_m,est_y_m,est_strength\n0.0,G,,,\n"));
        let back: Vec<EstimateRow> = read_rows(buf.as_slice()).unwrap();
        assert_eq!(snapshots_from_rows(&back), snaps);
    }
}
