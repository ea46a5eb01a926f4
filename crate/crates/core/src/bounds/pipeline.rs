//! The three β-bound routes and their combination.
//!
//! Warm-up: `β <= C(ρ) + ε + 2ρ√(ε(1-β))` with
//! `C(ρ) = (log2(3-ρ) - 2)(1-ρ²) + 1`.
//!
//! Main: with `λ = 1/2 + √(ln2·ε/2)`,
//! `π <= (√(ln2·ε/2) + 1/2 + ε + λ(log2(3-ρ) - 5/2))(1-ρ²) + ε + λ + 2ρ√(ε(λ-π))`
//! and `β <= π + ε`.
//!
//! Classic: `β <= 1/2 + ε`, from `|A||B| <= 2^(1.5n)`.

use std::collections::BTreeMap;
use std::f64::consts::LN_2;

use serde::Serialize;

use super::interval::Interval;
use super::solve::{golden_section_min, largest_fixed_point, quadratic_fixed_point};
use crate::error::{Error, Result};

/// Largest ε for which the main route is offered.
pub const MAIN_CERTIFIED_MAX_EPSILON: f64 = 0.01;

const RHO_GRID: usize = 1000;
const RHO_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundMethod {
    Warmup,
    Main,
    Classic,
}

impl BoundMethod {
    pub fn name(self) -> &'static str {
        match self {
            BoundMethod::Warmup => "warmup",
            BoundMethod::Main => "main",
            BoundMethod::Classic => "classic",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RateParams {
    pub epsilon: f64,
    pub beta: f64,
    pub rho: Option<f64>,
    pub lambda: Option<f64>,
    pub pi: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub method: BoundMethod,
    pub inputs: RateParams,
    pub terms: BTreeMap<String, f64>,
    pub beta_bound: f64,
    /// An outward-rounded evaluation of the closed-form solution succeeded and
    /// agrees with `beta_bound` to within the solver tolerance;
    /// `certified_upper` is then a rigorous upper end for the same quantity.
    pub certified: bool,
    pub certified_upper: Option<f64>,
    /// The `o(1)` terms are dropped.
    pub asymptotic: bool,
    /// Set by the combining calculators: the route attaining `beta_bound`.
    pub winner: Option<BoundMethod>,
}

/// Solver tolerance plus rounding slack.
const CONFIRM_SLACK: f64 = 1e-10;

fn confirmed(value: f64, upper: Option<f64>) -> bool {
    upper.is_some_and(|u| value <= u + CONFIRM_SLACK)
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::domain("epsilon", epsilon, "[0, 1]"));
    }
    Ok(())
}

fn check_rho(rho: f64) -> Result<()> {
    if !(0.0..1.0).contains(&rho) {
        return Err(Error::domain("rho", rho, "[0, 1)"));
    }
    Ok(())
}

fn sqrt_window(epsilon: f64) -> f64 {
    (LN_2 * epsilon / 2.0).sqrt()
}

fn interval_sqrt_window(epsilon: f64) -> Option<Interval> {
    (Interval::around(LN_2) * Interval::point(epsilon) * Interval::point(0.5)).clamp_nonneg().sqrt()
}

/// Enclosure of `cap - t²`, `t = -ρ√ε + √(ρ²ε + cap - k)`, the largest `x <= cap`
/// with `x <= k + 2ρ√(ε(cap - x))`.
fn interval_fixed_point(k: Interval, rho: f64, epsilon: f64, cap: Interval) -> Option<Interval> {
    let rho_i = Interval::point(rho);
    let eps_i = Interval::point(epsilon);
    let disc = rho_i.square() * eps_i + cap - k;
    if disc.hi < 0.0 {
        return Some(cap);
    }
    let root = Interval::new(disc.lo.max(0.0), disc.hi).sqrt()?;
    let t = root - rho_i * eps_i.sqrt()?;
    let t = Interval::new(t.lo.max(0.0), t.hi.max(0.0));
    let x = cap - t.square();
    // When the discriminant may be negative the cap itself is possible.
    Some(if disc.lo < 0.0 { Interval::new(x.lo, cap.hi.max(x.hi)) } else { x })
}

pub fn classic_bound(epsilon: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    Ok((0.5 + epsilon).min(1.0))
}

pub fn classic_report(epsilon: f64) -> Result<BoundReport> {
    let beta = classic_bound(epsilon)?;
    let mut terms = BTreeMap::new();
    terms.insert("half_plus_epsilon".into(), 0.5 + epsilon);
    terms.insert("trivial_cap".into(), 1.0);
    let upper = (Interval::point(0.5) + Interval::point(epsilon)).hi.min(1.0);
    Ok(BoundReport {
        method: BoundMethod::Classic,
        inputs: RateParams { epsilon, beta, rho: None, lambda: None, pi: None },
        terms,
        beta_bound: beta,
        certified: true,
        certified_upper: Some(upper),
        asymptotic: false,
        winner: None,
    })
}

/// Warm-up route at a fixed ρ.
pub fn warmup_route(epsilon: f64, rho: f64) -> Result<BoundReport> {
    check_epsilon(epsilon)?;
    check_rho(rho)?;
    let log_term = (3.0 - rho).log2();
    let shrink = 1.0 - rho * rho;
    let constant = (log_term - 2.0) * shrink + 1.0;
    let two_rho = 2.0 * rho;
    let beta = largest_fixed_point(|b| constant + epsilon + two_rho * (epsilon * (1.0 - b)).sqrt(), 1.0)?;

    let certified_upper = (|| {
        let rho_i = Interval::point(rho);
        let c = ((Interval::point(3.0) - rho_i).log2()? - Interval::point(2.0))
            * (Interval::point(1.0) - rho_i.square())
            + Interval::point(1.0);
        let x = interval_fixed_point(c + Interval::point(epsilon), rho, epsilon, Interval::point(1.0))?;
        Some(x.hi.min(1.0))
    })();

    let mut terms = BTreeMap::new();
    terms.insert("log2_3_minus_rho".into(), log_term);
    terms.insert("one_minus_rho_sq".into(), shrink);
    terms.insert("constant_scaled".into(), (log_term - 2.0) * shrink);
    terms.insert("constant_term".into(), constant);
    terms.insert("two_rho".into(), two_rho);
    terms.insert("closed_form_beta".into(), quadratic_fixed_point(constant + epsilon, rho, epsilon, 1.0));
    Ok(BoundReport {
        method: BoundMethod::Warmup,
        inputs: RateParams { epsilon, beta, rho: Some(rho), lambda: None, pi: None },
        terms,
        beta_bound: beta,
        certified: confirmed(beta, certified_upper),
        certified_upper,
        asymptotic: true,
        winner: None,
    })
}

/// Main route at a fixed ρ; `lambda` defaults to `1/2 + √(ln2·ε/2)`.
pub fn main_route(epsilon: f64, rho: f64, lambda: Option<f64>) -> Result<BoundReport> {
    check_epsilon(epsilon)?;
    check_rho(rho)?;
    if let Some(l) = lambda {
        if !(0.0..=1.0).contains(&l) {
            return Err(Error::domain("lambda", l, "[0, 1]"));
        }
    }
    let window = sqrt_window(epsilon);
    let lam = lambda.unwrap_or(0.5 + window);
    let log_term = (3.0 - rho).log2();
    let shrink = 1.0 - rho * rho;
    let bracket = window + 0.5 + epsilon + lam * (log_term - 2.5);
    let constant = bracket * shrink + epsilon + lam;
    let two_rho = 2.0 * rho;
    let pi = largest_fixed_point(|p| constant + two_rho * (epsilon * (lam - p)).sqrt(), lam)?;
    let beta = pi + epsilon;

    let certified_upper = (|| {
        let rho_i = Interval::point(rho);
        let eps_i = Interval::point(epsilon);
        let w = interval_sqrt_window(epsilon)?;
        let lam_i = match lambda {
            Some(l) => Interval::point(l),
            None => Interval::point(0.5) + w,
        };
        let log_i = (Interval::point(3.0) - rho_i).log2()?;
        let bracket_i = w + Interval::point(0.5) + eps_i + lam_i * (log_i - Interval::point(2.5));
        let k = bracket_i * (Interval::point(1.0) - rho_i.square()) + eps_i + lam_i;
        let x = interval_fixed_point(k, rho, epsilon, lam_i)?;
        Some((x + eps_i).hi)
    })();

    let eq2_constant = 0.5 * shrink;
    let eq2_lambda = (log_term - 2.5) * shrink + 1.0;
    let mut terms = BTreeMap::new();
    terms.insert("sqrt_ln2_epsilon_over_2".into(), window);
    terms.insert("lambda".into(), lam);
    terms.insert("log2_3_minus_rho".into(), log_term);
    terms.insert("one_minus_rho_sq".into(), shrink);
    terms.insert("eq1_bracket".into(), bracket);
    terms.insert("eq1_constant".into(), constant);
    terms.insert("two_rho".into(), two_rho);
    terms.insert("pi".into(), pi);
    terms.insert("closed_form_pi".into(), quadratic_fixed_point(constant, rho, epsilon, lam));
    terms.insert("eq2_constant".into(), eq2_constant);
    terms.insert("eq2_lambda_coefficient".into(), eq2_lambda);
    terms.insert("eq2_epsilon_coefficient".into(), shrink + 1.0);
    terms.insert("eq2_sqrt_epsilon_coefficient".into(), (LN_2 / 2.0).sqrt() * shrink);
    terms.insert("constant_at_half".into(), eq2_constant + 0.5 * eq2_lambda);
    Ok(BoundReport {
        method: BoundMethod::Main,
        inputs: RateParams { epsilon, beta, rho: Some(rho), lambda: Some(lam), pi: Some(pi) },
        terms,
        beta_bound: beta,
        certified: confirmed(beta, certified_upper),
        certified_upper,
        asymptotic: true,
        winner: None,
    })
}

/// Minimizes `f` over `ρ ∈ [0, 1)`: a grid of step 1/1000, then golden
/// section around the best grid point.
pub fn optimize_rho(f: impl Fn(f64) -> Result<f64>) -> Result<(f64, f64)> {
    let mut best = (0.0, f(0.0)?);
    for i in 1..RHO_GRID {
        let rho = i as f64 / RHO_GRID as f64;
        let v = f(rho)?;
        if v < best.1 {
            best = (rho, v);
        }
    }
    let step = 1.0 / RHO_GRID as f64;
    let a = (best.0 - step).max(0.0);
    let b = (best.0 + step).min(1.0 - step / 2.0);
    let (x, fx) = golden_section_min(|r| f(r).unwrap_or(f64::INFINITY), a, b, RHO_TOLERANCE);
    Ok(if fx < best.1 { (x, fx) } else { best })
}

/// Warm-up route, with ρ optimized when absent.
pub fn warmup_bound(epsilon: f64, rho: Option<f64>) -> Result<BoundReport> {
    check_epsilon(epsilon)?;
    let rho = match rho {
        Some(r) => r,
        None => optimize_rho(|r| Ok(warmup_route(epsilon, r)?.beta_bound))?.0,
    };
    warmup_route(epsilon, rho)
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct MainOptions {
    pub rho: Option<f64>,
    pub lambda: Option<f64>,
    /// Above `MAIN_CERTIFIED_MAX_EPSILON`, return the classic bound instead of
    /// an error.
    pub allow_fallback: bool,
}

/// The main route combined with the warm-up and classic bounds: the reported
/// `beta_bound` is the smallest of the three, labeled by `winner`.
pub fn main_bound(epsilon: f64, options: &MainOptions) -> Result<BoundReport> {
    check_epsilon(epsilon)?;
    if epsilon > MAIN_CERTIFIED_MAX_EPSILON {
        if !options.allow_fallback {
            return Err(Error::domain("epsilon", epsilon, "[0, 0.01] without fallback"));
        }
        let mut report = classic_report(epsilon)?;
        report.winner = Some(BoundMethod::Classic);
        report.terms.insert("main_route_skipped".into(), 1.0);
        return Ok(report);
    }
    let rho = match options.rho {
        Some(r) => r,
        None => optimize_rho(|r| Ok(main_route(epsilon, r, options.lambda)?.beta_bound))?.0,
    };
    let mut report = main_route(epsilon, rho, options.lambda)?;
    let warm = warmup_bound(epsilon, None)?;
    let classic = classic_report(epsilon)?;
    let route = report.beta_bound;
    report.terms.insert("main_route_beta".into(), route);
    report.terms.insert("warmup_beta".into(), warm.beta_bound);
    report.terms.insert("warmup_rho".into(), warm.inputs.rho.unwrap_or(f64::NAN));
    report.terms.insert("classic_beta".into(), classic.beta_bound);

    let mut winner = (BoundMethod::Main, route, report.certified_upper);
    for r in [&warm, &classic] {
        if r.beta_bound < winner.1 {
            winner = (r.method, r.beta_bound, r.certified_upper);
        }
    }
    report.beta_bound = winner.1;
    report.certified_upper = winner.2;
    report.certified = confirmed(winner.1, winner.2);
    report.winner = Some(winner.0);
    Ok(report)
}

/// The smallest available bound at any ε in `[0, 1]`.
pub fn best_bound(epsilon: f64) -> Result<BoundReport> {
    main_bound(epsilon, &MainOptions { allow_fallback: true, ..MainOptions::default() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn warmup_constant() {
        let r = warmup_route(0.0, 0.3838).unwrap();
        assert!((r.beta_bound - 0.4777).abs() < 5e-5);
        assert_eq!(r.terms["two_rho"], 0.7676);
        assert!(r.certified);
    }

    #[test]
    fn warmup_at_zero_rho() {
        let r = warmup_route(0.0, 0.0).unwrap();
        assert!((r.beta_bound - (3f64.log2() - 1.0)).abs() < 1e-11);
    }

    #[test]
    fn warmup_matches_closed_form() {
        // s = -ρ√ε + √(ρ²ε + 1 - C - ε), β = 1 - s².
        for eps in [0.0, 1e-4, 0.003, 0.01, 0.2] {
            for rho in [0.1, 0.3838, 0.7] {
                let r = warmup_route(eps, rho).unwrap();
                let c = ((3.0f64 - rho).log2() - 2.0) * (1.0 - rho * rho) + 1.0;
                let s = -rho * eps.sqrt() + (rho * rho * eps + 1.0 - c - eps).sqrt();
                let want = 1.0 - s * s;
                assert!((r.beta_bound - want).abs() < 1e-11, "{eps} {rho}");
                assert!(r.certified_upper.unwrap() >= want);
            }
        }
    }

    #[test]
    fn main_constant() {
        let r = main_route(0.0, 0.654, None).unwrap();
        assert!((r.beta_bound - 0.4228).abs() < 5e-5);
        assert!((r.terms["eq2_constant"] - 0.2861421).abs() < 1e-6);
        assert!((r.terms["eq2_lambda_coefficient"] - 0.2733156).abs() < 1e-6);
        assert!(r.certified);
    }

    #[test]
    fn main_route_reproduces_from_terms() {
        for eps in [0.0, 1e-5, 0.004, 0.01] {
            let r = main_route(eps, 0.654, None).unwrap();
            let t = &r.terms;
            let pi = t["pi"];
            let rhs = t["eq1_constant"] + t["two_rho"] * (eps * (t["lambda"] - pi)).sqrt();
            assert!((pi - rhs).abs() < 1e-11);
            assert!((pi - t["closed_form_pi"]).abs() < 1e-11);
            assert_eq!(r.beta_bound, pi + eps);
        }
    }

    #[test]
    fn classic_values() {
        assert_eq!(classic_bound(0.0).unwrap(), 0.5);
        assert_eq!(classic_bound(0.01).unwrap(), 0.51);
        assert_eq!(classic_bound(1.0).unwrap(), 1.0);
        assert!(classic_bound(-0.1).is_err());
    }

    #[test]
    fn optimized_warmup_near_published_rho() {
        let r = warmup_bound(0.0, None).unwrap();
        assert!((r.beta_bound - 0.4777).abs() < 1e-4);
        assert!((r.inputs.rho.unwrap() - 0.3838).abs() < 0.01);
    }

    #[test]
    fn main_bound_labels_winner() {
        let r = main_bound(0.0, &MainOptions { rho: Some(0.654), ..Default::default() }).unwrap();
        assert_eq!(r.winner, Some(BoundMethod::Main));
        let r = main_bound(0.01, &MainOptions::default()).unwrap();
        assert_eq!(r.winner, Some(BoundMethod::Classic));
        assert_eq!(r.beta_bound, 0.51);
        assert!(main_bound(0.02, &MainOptions::default()).is_err());
        let r = best_bound(0.02).unwrap();
        assert_eq!(r.winner, Some(BoundMethod::Classic));
    }

    #[test]
    fn rejects_rho_one() {
        assert!(warmup_route(0.0, 1.0).is_err());
        assert!(main_route(0.0, 1.0, None).is_err());
    }
}
