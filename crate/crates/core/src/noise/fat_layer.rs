//! Fraction of a code lying in the layer `|x ⊕ z| ∈ (1/2 ± γ) n`.

use num_bigint::BigUint;
use num_traits::Zero;
use serde::Serialize;

use crate::code::BinaryCode;
use crate::coords::low_mask;
use crate::error::{Error, Result};
use crate::math::{big_ratio, binomial_big};

/// `|d - n/2| <= γn`, with a relative slack of 1e-12 so that exact boundary
/// values such as `γ = 1/2` are not lost to rounding.
pub fn in_fat_window(d: usize, n: usize, gamma: f64) -> bool {
    let off = (2.0 * d as f64 - n as f64).abs();
    off <= 2.0 * gamma * n as f64 * (1.0 + 1e-12)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FatLayerReport {
    pub n: usize,
    pub gamma: f64,
    pub in_layer: usize,
    pub total: usize,
    pub fraction: f64,
    /// Set when an ε was supplied, `|X| >= 2^((1-ε)n)` and
    /// `γ >= √(ln2·ε/2)`: whether at least half of `X` lies in the layer.
    /// Measured, never asserted; the underlying claim is asymptotic.
    pub at_least_half: Option<bool>,
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma > 0.0 && gamma <= 0.5) {
        return Err(Error::domain("gamma", gamma, "(0, 1/2]"));
    }
    Ok(())
}

pub fn fat_layer_fraction(code: &BinaryCode, z: u64, gamma: f64, epsilon: Option<f64>) -> Result<FatLayerReport> {
    check_gamma(gamma)?;
    let n = code.word_length();
    if z & !low_mask(n) != 0 {
        return Err(Error::WordOutOfRange { word: z, n });
    }
    let in_layer = code.words().iter().filter(|&&x| in_fat_window((x ^ z).count_ones() as usize, n, gamma)).count();
    let fraction = in_layer as f64 / code.len() as f64;
    let at_least_half = epsilon.and_then(|eps| {
        let large = code.rate() >= 1.0 - eps;
        let wide = gamma >= (std::f64::consts::LN_2 * eps / 2.0).sqrt();
        (large && wide).then_some(2 * in_layer >= code.len())
    });
    Ok(FatLayerReport { n, gamma, in_layer, total: code.len(), fraction, at_least_half })
}

/// The same fraction for the full cube `{0,1}^n`, from exact binomial sums;
/// works far beyond enumerable `n`.
pub fn full_cube_fat_layer_fraction(n: usize, gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    let mut inside = BigUint::zero();
    for d in (0..=n).filter(|&d| in_fat_window(d, n, gamma)) {
        inside += binomial_big(n, d);
    }
    Ok(big_ratio(&inside, &(BigUint::from(1u8) << n)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_width_covers_everything() {
        let cube = BinaryCode::full_cube(7).unwrap();
        let r = fat_layer_fraction(&cube, 0b1010101, 0.5, None).unwrap();
        assert_eq!(r.fraction, 1.0);
        assert_eq!(full_cube_fat_layer_fraction(7, 0.5).unwrap(), 1.0);
    }

    #[test]
    fn enumeration_matches_binomials() {
        for n in 1..=12 {
            let cube = BinaryCode::full_cube(n).unwrap();
            for gamma in [0.05, 0.1, 0.2, 0.3] {
                let r = fat_layer_fraction(&cube, 0, gamma, None).unwrap();
                let b = full_cube_fat_layer_fraction(n, gamma).unwrap();
                assert!((r.fraction - b).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn rejects_gamma_out_of_range() {
        let cube = BinaryCode::full_cube(3).unwrap();
        assert!(fat_layer_fraction(&cube, 0, 0.0, None).is_err());
        assert!(fat_layer_fraction(&cube, 0, 0.6, None).is_err());
        assert!(full_cube_fat_layer_fraction(3, -1.0).is_err());
    }

    #[test]
    fn reports_half_only_when_hypotheses_hold() {
        let cube = BinaryCode::full_cube(8).unwrap();
        let eps = 0.01;
        let gamma = (std::f64::consts::LN_2 * eps / 2.0).sqrt();
        let r = fat_layer_fraction(&cube, 0, gamma, Some(eps)).unwrap();
        assert!(r.at_least_half.is_some());
        let r = fat_layer_fraction(&cube, 0, gamma / 2.0, Some(eps)).unwrap();
        assert_eq!(r.at_least_half, None);
    }
}
