//! Evaluation grids for kernel sweeps and norm estimation.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Axis spacing scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Spacing {
    Uniform,
    Geometric,
}

/// One-dimensional grid description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl Axis {
    pub fn uniform(min: f64, max: f64, count: usize) -> Self {
        Axis {
            min,
            max,
            count,
            spacing: Spacing::Uniform,
        }
    }

    pub fn geometric(min: f64, max: f64, count: usize) -> Self {
        Axis {
            min,
            max,
            count,
            spacing: Spacing::Geometric,
        }
    }

    pub fn points(&self) -> Vec<f64> {
        assert!(self.count >= 1);
        if self.count == 1 {
            return vec![self.min];
        }
        let n = self.count as f64 - 1.0;
        match self.spacing {
            Spacing::Uniform => (0..self.count)
                .map(|i| self.min + (self.max - self.min) * i as f64 / n)
                .collect(),
            Spacing::Geometric => {
                let (la, lb) = (self.min.ln(), self.max.ln());
                (0..self.count)
                    .map(|i| (la + (lb - la) * i as f64 / n).exp())
                    .collect()
            }
        }
    }

    pub fn refined(&self, factor: usize) -> Axis {
        let mut a = self.clone();
        a.count *= factor;
        a
    }
}

/// Planar (x, y) evaluation grid for kernel sweeps. Diagonal points are never
/// emitted; pairs closer than `min_gap` are skipped.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x: Axis,
    pub y: Axis,
    pub min_gap: f64,
}

impl GridSpec {
    pub fn square(axis: Axis) -> Self {
        GridSpec {
            x: axis.clone(),
            y: axis,
            min_gap: 1e-6,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.x.min > 0.0 && self.y.min > 0.0) {
            return domain("grid coordinates must be strictly positive");
        }
        if self.x.count == 0 || self.y.count == 0 {
            return domain("grid axes need at least one point");
        }
        Ok(())
    }

    /// Off-diagonal point pairs in deterministic row-major order.
    pub fn pairs(&self) -> Vec<(f64, f64)> {
        let xs = self.x.points();
        let ys = self.y.points();
        let mut out = Vec::with_capacity(xs.len() * ys.len());
        for &x in &xs {
            for &y in &ys {
                if (x - y).abs() >= self.min_gap {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// Short textual descriptor, recorded in certificates for reproducibility.
    pub fn descriptor(&self) -> String {
        format!(
            "x[{:?} {} {} n={}] y[{:?} {} {} n={}] gap={}",
            self.x.spacing, self.x.min, self.x.max, self.x.count,
            self.y.spacing, self.y.min, self.y.max, self.y.count,
            self.min_gap
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_axis_endpoints() {
        let pts = Axis::geometric(1e-3, 40.0, 11).points();
        assert!((pts[0] - 1e-3).abs() < 1e-15);
        assert!((pts[10] - 40.0).abs() < 1e-12);
        assert_eq!(pts.len(), 11);
    }

    #[test]
    fn grid_skips_diagonal() {
        let g = GridSpec {
            x: Axis::uniform(1.0, 3.0, 3),
            y: Axis::uniform(1.0, 3.0, 3),
            min_gap: 1e-6,
        };
        let pairs = g.pairs();
        assert_eq!(pairs.len(), 6);
        assert!(pairs.iter().all(|&(x, y)| (x - y).abs() >= 1e-6));
    }
}
