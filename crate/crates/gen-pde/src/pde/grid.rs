//! Dense solution grids.

use crate::domain::DomainBox;
use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, serde::Serialize, serde::Deserialize)]
pub struct GridMeta {
    pub model: String,
    pub domain: Option<DomainBox>,
}

/// Values on a uniform `x x t` grid, stored row-major in `x`:
/// `values[ix * nt + it]`.
#[derive(Clone, Debug, serde::Serialize, serde::Deserialize)]
pub struct SolutionGrid {
    pub xs: Vec<f64>,
    pub ts: Vec<f64>,
    pub values: Vec<f64>,
    pub reference: Option<Vec<f64>>,
    pub meta: GridMeta,
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2);
    let step = (hi - lo) / (n - 1) as f64;
    (0..n).map(|i| lo + step * i as f64).collect()
}

impl SolutionGrid {
    pub fn new(xs: Vec<f64>, ts: Vec<f64>, values: Vec<f64>, meta: GridMeta) -> Result<Self> {
        if values.len() != xs.len() * ts.len() {
            return Err(Error::Config(format!(
                "grid values length {} does not match {} x {}",
                values.len(),
                xs.len(),
                ts.len()
            )));
        }
        for grid in [&xs, &ts] {
            if grid.len() < 2 || grid.windows(2).any(|w| w[1] <= w[0]) {
                return Err(Error::Config("grid axes must be strictly increasing".into()));
            }
        }
        Ok(SolutionGrid { xs, ts, values, reference: None, meta })
    }

    pub fn nx(&self) -> usize {
        self.xs.len()
    }

    pub fn nt(&self) -> usize {
        self.ts.len()
    }

    pub fn value(&self, ix: usize, it: usize) -> f64 {
        self.values[ix * self.nt() + it]
    }

    /// Column of values at time index `it`.
    pub fn at_time(&self, it: usize) -> Vec<f64> {
        (0..self.nx()).map(|ix| self.value(ix, it)).collect()
    }

    /// Index of the grid time closest to `t`.
    pub fn nearest_time(&self, t: f64) -> usize {
        self.ts
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - t).abs().partial_cmp(&(b.1 - t).abs()).unwrap())
            .map(|(i, _)| i)
            .unwrap()
    }
}
