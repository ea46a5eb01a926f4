//! Finite-`n` forms of the two bounds on the refined probability
//! `Pr[a ∈ A, b ∈ B]`, `b ~ρ^L a`, for a UDCP whose `A` is ε-dense with
//! respect to `L`. Both are normalized by `n` (log2 / n).
//!
//! Upper: `√(ln2·ε/2) - 1/2 + λ(log2(3-ρ) - 3/2) + 1/n`.
//!
//! Lower: `(π - λ - ε - 2ρ√(ε(λ-π))) / (1-ρ²) + λ - 1 - ε` minus two
//! explicit deficits. Conditioning on `a_L ∈ A_L, b_L ∈ B_L` costs
//! `2^(-|R|-εn)/2`, giving `1/n`. Feeding `|A_L| >= 2^(|L|-εn-1)` into the
//! isoperimetric bound replaces ε by `ε + 1/n` inside the first fraction.

use serde::Serialize;

use super::exact::exact_joint_probability;
use super::spec::CorrelationSpec;
use crate::code::{check_density, extract_dense_subcode, CodePair, DensityCheck};
use crate::coords::CoordSet;
use crate::error::{Error, Result};
use crate::math::{int_ge_pow2, rational_to_f64, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Lemma6Terms {
    /// `√(ln2·ε/2)`.
    pub sqrt_term: f64,
    /// `λ(log2(3-ρ) - 3/2)`.
    pub lambda_term: f64,
    pub asymptotic: f64,
    /// `1/n`.
    pub finite_n: f64,
    pub total: f64,
}

pub fn lemma6_upper(lambda: f64, epsilon: f64, rho: f64, n: usize) -> Result<Lemma6Terms> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::domain("rho", rho, "[0, 1]"));
    }
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::domain("lambda", lambda, "[0, 1]"));
    }
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::domain("epsilon", epsilon, "[0, 1]"));
    }
    if n == 0 {
        return Err(Error::domain("n", 0.0, ">= 1"));
    }
    let sqrt_term = (std::f64::consts::LN_2 * epsilon / 2.0).sqrt();
    let lambda_term = lambda * ((3.0 - rho).log2() - 1.5);
    let asymptotic = sqrt_term - 0.5 + lambda_term;
    let finite_n = 1.0 / n as f64;
    Ok(Lemma6Terms { sqrt_term, lambda_term, asymptotic, finite_n, total: asymptotic + finite_n })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Lemma7Terms {
    pub asymptotic: f64,
    /// `1/n`, from the factor 1/2 in the conditional density of `a_R`.
    pub deficit_conditional: f64,
    /// From the `-1` in `|A_L| >= 2^(|L|-εn-1)`:
    /// `(1/n + 2ρ(√((ε+1/n)(λ-π)) - √(ε(λ-π)))) / (1-ρ²)`.
    pub deficit_density: f64,
    pub total: f64,
}

pub fn lemma7_lower(lambda: f64, pi: f64, epsilon: f64, rho: f64, n: usize) -> Result<Lemma7Terms> {
    if !(0.0..1.0).contains(&rho) {
        return Err(Error::domain("rho", rho, "[0, 1)"));
    }
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::domain("lambda", lambda, "[0, 1]"));
    }
    if !(0.0..=lambda).contains(&pi) {
        return Err(Error::domain("pi", pi, "[0, lambda]"));
    }
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::domain("epsilon", epsilon, "[0, 1]"));
    }
    if n == 0 {
        return Err(Error::domain("n", 0.0, ">= 1"));
    }
    let denom = 1.0 - rho * rho;
    let gap = lambda - pi;
    let inv_n = 1.0 / n as f64;
    let asymptotic = (pi - lambda - epsilon - 2.0 * rho * (epsilon * gap).sqrt()) / denom + lambda - 1.0 - epsilon;
    let deficit_density = (inv_n + 2.0 * rho * (((epsilon + inv_n) * gap).sqrt() - (epsilon * gap).sqrt())) / denom;
    Ok(Lemma7Terms {
        asymptotic,
        deficit_conditional: inv_n,
        deficit_density,
        total: asymptotic - inv_n - deficit_density,
    })
}

/// Replaces `A` by its ε-dense part with respect to `l`. `epsilon` defaults to
/// the smallest multiple of 1/100 with `|A| >= 2^((1-ε)n)`.
pub fn dense_restriction(pair: &CodePair, l: &CoordSet, epsilon: Option<Rational>) -> Result<(CodePair, Rational)> {
    let n = pair.word_length();
    let epsilon = match epsilon {
        Some(e) => e,
        None => (0..=100)
            .map(|k| Rational::new(k, 100))
            .find(|e| {
                int_ge_pow2(pair.a().len() as u128, Rational::from_integer(n as i64) * (Rational::from_integer(1) - e))
            })
            .expect("ε = 1 always qualifies"),
    };
    let report = extract_dense_subcode(pair.a(), l, epsilon)?;
    Ok((CodePair::new(report.subset, pair.b().clone())?, epsilon))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SandwichReport {
    pub n: usize,
    pub l_set: CoordSet,
    pub lambda: f64,
    pub pi: f64,
    pub epsilon: f64,
    pub rho: f64,
    pub density: DensityCheck,
    pub exact_log2_per_n: f64,
    pub lemma6: Lemma6Terms,
    pub lemma7: Lemma7Terms,
    pub upper_holds: bool,
    pub lower_holds: bool,
}

/// Slack for comparing the normalized probability with the bounds.
const SANDWICH_TOLERANCE: f64 = 1e-12;

/// Places the exact refined probability between both bounds. `pair.a()` must
/// be ε-dense with respect to `l`; the density check is part of the report.
pub fn sandwich(pair: &CodePair, l: &CoordSet, epsilon: Rational, rho: f64) -> Result<SandwichReport> {
    if !pair.is_udcp() {
        return Err(Error::NotVerified);
    }
    let n = pair.word_length();
    let density = check_density(pair.a(), l, epsilon)?;
    let eps = rational_to_f64(&epsilon);
    let lambda = l.len() as f64 / n as f64;
    let pi = (pair.b().projection_size(l) as f64).log2() / n as f64;
    let report = exact_joint_probability(pair, &CorrelationSpec::new(n, rho, Some(*l))?)?;
    let lemma6 = lemma6_upper(lambda, eps, rho, n)?;
    let lemma7 = lemma7_lower(lambda, pi.min(lambda), eps, rho, n)?;
    let value = report.exact_log2_per_n;
    Ok(SandwichReport {
        n,
        l_set: *l,
        lambda,
        pi,
        epsilon: eps,
        rho,
        upper_holds: value <= lemma6.total + SANDWICH_TOLERANCE,
        lower_holds: value >= lemma7.total - SANDWICH_TOLERANCE,
        density,
        exact_log2_per_n: value,
        lemma6,
        lemma7,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lemma6_collapses_at_lambda_zero() {
        for rho in [0.0, 0.5, 1.0] {
            let t = lemma6_upper(0.0, 0.0, rho, 8).unwrap();
            assert!((t.total - (-0.5 + 1.0 / 8.0)).abs() < 1e-15);
        }
    }

    #[test]
    fn lemma6_at_warmup_rho() {
        let t = lemma6_upper(1.0, 0.0, 0.3838, 10).unwrap();
        let expected = 2.6162f64.log2() - 2.0;
        assert!((t.asymptotic - expected).abs() < 1e-12);
        assert!((t.asymptotic - (-0.6125)).abs() < 1e-4);
        assert!((t.total - (expected + 0.1)).abs() < 1e-12);
    }

    #[test]
    fn lemma7_full_projection() {
        // π = λ = 1, ε = 0: the asymptotic form is 0.
        let t = lemma7_lower(1.0, 1.0, 0.0, 0.4, 5).unwrap();
        assert!(t.asymptotic.abs() < 1e-15);
        let expected_deficit = 0.2 + 0.2 / (1.0 - 0.16);
        assert!((t.total + expected_deficit).abs() < 1e-15);
    }

    #[test]
    fn lemma7_independence() {
        let (pi, eps) = (0.3, 0.05);
        let t = lemma7_lower(1.0, pi, eps, 0.0, 20).unwrap();
        assert!((t.asymptotic - (pi - 1.0 - 2.0 * eps)).abs() < 1e-15);
        assert!((t.deficit_density - 0.05).abs() < 1e-15);
    }

    #[test]
    fn lemma7_domain() {
        assert!(lemma7_lower(0.5, 0.6, 0.0, 0.1, 4).is_err());
        assert!(lemma7_lower(0.5, 0.1, 0.0, 1.0, 4).is_err());
        assert!(lemma6_upper(1.2, 0.0, 0.1, 4).is_err());
    }
}
