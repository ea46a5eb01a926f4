use serde::Serialize;

use crate::coords::CoordSet;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CorrelationSpec {
    pub n: usize,
    pub rho: f64,
    /// Correlated coordinates; `None` means all of `[n]`.
    pub l_set: Option<CoordSet>,
}

impl CorrelationSpec {
    /// Requires `0 <= rho < 1`.
    pub fn new(n: usize, rho: f64, l_set: Option<CoordSet>) -> Result<Self> {
        if !(0.0..1.0).contains(&rho) {
            return Err(Error::domain("rho", rho, "[0, 1)"));
        }
        Self::build(n, rho, l_set)
    }

    /// Like [`new`](Self::new) but also admits the degenerate copy `rho = 1`,
    /// which only the sampler and the exact probability accept.
    pub fn for_sampling(n: usize, rho: f64, l_set: Option<CoordSet>) -> Result<Self> {
        if !(0.0..=1.0).contains(&rho) {
            return Err(Error::domain("rho", rho, "[0, 1]"));
        }
        Self::build(n, rho, l_set)
    }

    fn build(n: usize, rho: f64, l_set: Option<CoordSet>) -> Result<Self> {
        if let Some(l) = l_set {
            if l.n() != n {
                return Err(Error::LengthMismatch { left: n, right: l.n() });
            }
        }
        Ok(CorrelationSpec { n, rho, l_set })
    }

    pub fn correlated(&self) -> CoordSet {
        self.l_set.unwrap_or_else(|| CoordSet::full(self.n))
    }

    /// Probability that a correlated coordinate is copied.
    pub fn agree_probability(&self) -> f64 {
        (1.0 + self.rho) / 2.0
    }
}
