//! Rectangular space-time domains.

use crate::error::{Error, Result};

/// Axis-aligned box `[x_lo, x_hi] x [t_lo, t_hi]`.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct DomainBox {
    pub x_lo: f64,
    pub x_hi: f64,
    pub t_lo: f64,
    pub t_hi: f64,
}

impl DomainBox {
    pub fn new(x_lo: f64, x_hi: f64, t_lo: f64, t_hi: f64) -> Result<Self> {
        if !(x_lo < x_hi && t_lo < t_hi) {
            return Err(Error::Config(format!(
                "empty domain box [{x_lo}, {x_hi}] x [{t_lo}, {t_hi}]"
            )));
        }
        Ok(DomainBox { x_lo, x_hi, t_lo, t_hi })
    }

    pub fn contains(&self, x: f64, t: f64) -> bool {
        x >= self.x_lo && x <= self.x_hi && t >= self.t_lo && t <= self.t_hi
    }

    pub fn x_span(&self) -> f64 {
        self.x_hi - self.x_lo
    }

    pub fn t_span(&self) -> f64 {
        self.t_hi - self.t_lo
    }
}
