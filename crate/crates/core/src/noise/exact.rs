use serde::Serialize;

use super::lemmas::{Lemma6Terms, Lemma7Terms};
use super::sample::McEstimate;
use super::spec::CorrelationSpec;
use crate::code::{distance_census, CodePair};
use crate::coords::CoordSet;
use crate::error::{Error, Result};
use crate::math::{log2_sum_exp2, CompensatedSum};

/// Pair counts at or below this size get the direct cross-check.
pub const DIRECT_CHECK_LIMIT: u64 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DirectCheck {
    pub probability: f64,
    pub relative_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbabilityReport {
    pub n: usize,
    pub rho: f64,
    pub l_set: Option<CoordSet>,
    /// `|L|`.
    pub correlated_coords: usize,
    /// `|R| = n - |L|`.
    pub free_coords: usize,
    /// `W_d` measured on the correlated coordinates.
    pub census: Vec<u64>,
    pub exact_log2: f64,
    pub exact_log2_per_n: f64,
    pub probability: f64,
    pub direct: Option<DirectCheck>,
    pub monte_carlo: Option<McEstimate>,
    pub lower_bound_log2: Option<f64>,
    pub upper_bound_log2: Option<f64>,
    pub rsse_lower_log2: Option<f64>,
    pub lemma6: Option<Lemma6Terms>,
    pub lemma7: Option<Lemma7Terms>,
}

/// `Pr[a ∈ A, b ∈ B]` for uniform `a` and `b ~ρ^L a`, as
/// `2^-n Σ_d ((1+ρ)/2)^(m-d) ((1-ρ)/2)^d 2^-|R| W_d` with `m = |L|` and the
/// census restricted to `L`. Summed in log2 space.
pub fn exact_joint_probability(pair: &CodePair, spec: &CorrelationSpec) -> Result<ProbabilityReport> {
    let (census, exact_log2) = census_log2(pair, spec)?;
    let n = pair.word_length();
    let m = spec.correlated().len();
    let probability = exact_log2.exp2();

    let direct = (pair.product_size() <= DIRECT_CHECK_LIMIT).then(|| {
        let p = direct_joint_probability(pair, spec);
        DirectCheck { probability: p, relative_error: relative_error(probability, p) }
    });

    Ok(ProbabilityReport {
        n,
        rho: spec.rho,
        l_set: spec.l_set,
        correlated_coords: m,
        free_coords: n - m,
        census,
        exact_log2,
        exact_log2_per_n: exact_log2 / n as f64,
        probability,
        direct,
        monte_carlo: None,
        lower_bound_log2: None,
        upper_bound_log2: None,
        rsse_lower_log2: None,
        lemma6: None,
        lemma7: None,
    })
}

/// The restricted census and `log2 Pr[a ∈ A, b ∈ B]`, without the cross-check.
pub(crate) fn census_log2(pair: &CodePair, spec: &CorrelationSpec) -> Result<(Vec<u64>, f64)> {
    let n = pair.word_length();
    if spec.n != n {
        return Err(Error::LengthMismatch { left: n, right: spec.n });
    }
    if !(0.0..=1.0).contains(&spec.rho) {
        return Err(Error::domain("rho", spec.rho, "[0, 1]"));
    }
    let l = spec.correlated();
    let census = distance_census(pair, Some(&l))?;
    let m = l.len();
    let r = n - m;
    let log_agree = spec.agree_probability().log2();
    let log_flip = ((1.0 - spec.rho) / 2.0).log2();

    let terms: Vec<f64> = census
        .counts
        .iter()
        .enumerate()
        .filter(|&(_, &w)| w > 0)
        .map(|(d, &w)| {
            let mut t = -(n as f64) - r as f64 + (w as f64).log2();
            if m > d {
                t += (m - d) as f64 * log_agree;
            }
            if d > 0 {
                t += d as f64 * log_flip;
            }
            t
        })
        .collect();
    // A probability: rounding may only push it above 0 when it is 1.
    let exact_log2 = log2_sum_exp2(&terms).min(0.0);
    Ok((census.counts, exact_log2))
}

fn relative_error(value: f64, reference: f64) -> f64 {
    if reference == 0.0 {
        if value == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        ((value - reference) / reference).abs()
    }
}

/// Sums the probability of every pair coordinate by coordinate, without a
/// census.
pub fn direct_joint_probability(pair: &CodePair, spec: &CorrelationSpec) -> f64 {
    let n = pair.word_length();
    let l = spec.correlated();
    let agree = spec.agree_probability();
    let flip = (1.0 - spec.rho) / 2.0;
    let base = (-(n as f64)).exp2();
    let mut acc = CompensatedSum::default();
    for &a in pair.a().words() {
        for &b in pair.b().words() {
            let diff = a ^ b;
            let mut p = base;
            for j in 0..n {
                p *= if !l.contains(j) {
                    0.5
                } else if diff & crate::coords::coord_bit(n, j) != 0 {
                    flip
                } else {
                    agree
                };
            }
            acc.add(p);
        }
    }
    acc.value()
}
