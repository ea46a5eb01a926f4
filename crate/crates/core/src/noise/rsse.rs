//! Reverse small-set expansion: for `F, G ⊆ {0,1}^U` with `|F| >= 2^(f|U|)`
//! and `|G| >= 2^(g|U|)`,
//!
//! `Pr[x ∈ F, y ∈ G] >= 2^(-|U| ((1-f) + (1-g) + 2ρ√((1-f)(1-g))) / (1-ρ²))`
//!
//! for `y ~ρ x`.

use serde::Serialize;

use super::exact::census_log2;
use super::spec::CorrelationSpec;
use crate::code::CodePair;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RssBoundInputs {
    pub u_size: usize,
    pub f: f64,
    pub g: f64,
    pub rho: f64,
}

impl RssBoundInputs {
    /// Rates taken from the set sizes: `f = log2|F| / |U|`.
    pub fn from_sizes(u_size: usize, f_size: usize, g_size: usize, rho: f64) -> Self {
        let rate = |s: usize| if u_size == 0 { 1.0 } else { (s as f64).log2() / u_size as f64 };
        RssBoundInputs { u_size, f: rate(f_size), g: rate(g_size), rho }
    }
}

/// The bound, in log2.
pub fn rsse_lower_bound(inputs: &RssBoundInputs) -> Result<f64> {
    let RssBoundInputs { u_size, f, g, rho } = *inputs;
    if !(0.0..1.0).contains(&rho) {
        return Err(Error::domain("rho", rho, "[0, 1)"));
    }
    for (name, v) in [("f", f), ("g", g)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::domain(name, v, "[0, 1]"));
        }
    }
    let (df, dg) = (1.0 - f, 1.0 - g);
    Ok(-(u_size as f64) * (df + dg + 2.0 * rho * (df * dg).sqrt()) / (1.0 - rho * rho))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RsseCheck {
    pub inputs: RssBoundInputs,
    pub exact_log2: f64,
    pub bound_log2: f64,
    pub margin: f64,
    pub holds: bool,
}

/// Absolute log2 slack absorbing rounding when bound and probability coincide
/// (full cubes, or `ρ = 0` where the bound is an identity).
pub const RSSE_TOLERANCE: f64 = 1e-12;

/// Exact probability against the bound for the sets `F = A`, `G = B`.
pub fn rsse_check(pair: &CodePair, rho: f64) -> Result<RsseCheck> {
    let n = pair.word_length();
    let inputs = RssBoundInputs::from_sizes(n, pair.a().len(), pair.b().len(), rho);
    let bound_log2 = rsse_lower_bound(&inputs)?;
    let (_, exact_log2) = census_log2(pair, &CorrelationSpec::new(n, rho, None)?)?;
    let margin = exact_log2 - bound_log2;
    Ok(RsseCheck { inputs, exact_log2, bound_log2, margin, holds: margin >= -RSSE_TOLERANCE })
}
