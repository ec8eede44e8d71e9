use serde::{Deserialize, Serialize};

use super::MetricError;
use crate::geom::{Area, Point};

/// A `cols x rows` grid of square cells anchored at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridGeometry {
    pub cols: usize,
    pub rows: usize,
    pub cell_size_m: f64,
}

impl GridGeometry {
    pub fn new(cols: usize, rows: usize, cell_size_m: f64) -> Result<Self, MetricError> {
        if cols == 0 || rows == 0 || !(cell_size_m > 0.0) || !cell_size_m.is_finite() {
            return Err(MetricError::InvalidGeometry);
        }
        Ok(Self { cols, rows, cell_size_m })
    }

    /// Smallest grid of `cell_size_m` cells that covers `area`.
    pub fn covering(area: Area, cell_size_m: f64) -> Result<Self, MetricError> {
        let cols = (area.width / cell_size_m - 1e-9).ceil().max(1.0) as usize;
        let rows = (area.height / cell_size_m - 1e-9).ceil().max(1.0) as usize;
        Self::new(cols, rows, cell_size_m)
    }

    pub fn len(&self) -> usize {
        self.cols * self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn width_m(&self) -> f64 {
        self.cols as f64 * self.cell_size_m
    }

    pub fn height_m(&self) -> f64 {
        self.rows as f64 * self.cell_size_m
    }

    /// Diagonal of the grid extent; the unit of distance for Prohorov.
    pub fn extent_diagonal(&self) -> f64 {
        self.width_m().hypot(self.height_m())
    }

    /// Row-major index of the cell holding `p`. Points on the far edges
    /// belong to the last row/column.
    pub fn cell_of(&self, p: &Point) -> Option<usize> {
        if !(p.x >= 0.0 && p.y >= 0.0 && p.x <= self.width_m() && p.y <= self.height_m()) {
            return None;
        }
        let col = ((p.x / self.cell_size_m) as usize).min(self.cols - 1);
        let row = ((p.y / self.cell_size_m) as usize).min(self.rows - 1);
        Some(row * self.cols + col)
    }

    pub fn center(&self, index: usize) -> Point {
        let (row, col) = (index / self.cols, index % self.cols);
        Point::new(
            (col as f64 + 0.5) * self.cell_size_m,
            (row as f64 + 0.5) * self.cell_size_m,
        )
    }
}

/// Non-negative strength per grid cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrengthDistribution {
    pub geometry: GridGeometry,
    pub values: Vec<f64>,
    pub normalized: bool,
}

impl StrengthDistribution {
    pub fn zeros(geometry: GridGeometry) -> Self {
        Self {
            geometry,
            values: vec![0.0; geometry.len()],
            normalized: false,
        }
    }

    pub fn uniform(geometry: GridGeometry) -> Self {
        let n = geometry.len();
        Self {
            geometry,
            values: vec![1.0 / n as f64; n],
            normalized: true,
        }
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.values.iter().enumerate().filter(|(_, v)| **v > 0.0).map(|(i, _)| i)
    }

    pub fn support_size(&self) -> usize {
        self.support().count()
    }

    pub fn normalize(&mut self) -> Result<(), MetricError> {
        let total = self.total();
        if !(total > 0.0) {
            return Err(MetricError::ZeroMass);
        }
        for v in &mut self.values {
            *v /= total;
        }
        self.normalized = true;
        Ok(())
    }

    pub fn normalized(mut self) -> Result<Self, MetricError> {
        self.normalize()?;
        Ok(self)
    }
}

/// Accumulates `(point, strength)` pairs into their cells.
pub fn rasterize(
    locations: &[(Point, f64)],
    geometry: GridGeometry,
    normalize: bool,
) -> Result<StrengthDistribution, MetricError> {
    let mut dist = StrengthDistribution::zeros(geometry);
    for (p, s) in locations {
        let cell = geometry
            .cell_of(p)
            .ok_or(MetricError::OutOfExtent { x: p.x, y: p.y })?;
        dist.values[cell] += s;
    }
    if normalize {
        dist.normalize()?;
    }
    Ok(dist)
}
