//! Sign check of
//! `R(ε) = c1·ε + (c2 - 1 + c3·√(c4 + √(ln2·ε/2) - √ε + s·ε))·√ε`
//! on `(0, ε_max]`, where the contradiction step of the main route needs
//! `R < 0`.
//!
//! The published constants use `s = -1`. Re-deriving from `ρ = 0.654`
//! (substituting `π >= C0 + √ε - ε` into `λ - π` with
//! `λ = 1/2 + √(ln2·ε/2)`) gives `s = +1`; [`ineq3_rederived`] evaluates that
//! form, which turns positive near `ε ≈ 0.00655`.
//!
//! Interval mode covers `[ε0, ε_max]` by subintervals whose outward-rounded
//! upper bound on `R` is negative. On `(0, ε0]` it uses
//! `R(ε) <= √ε·(c1√ε0 + c2 - 1 + c3√(c4 + max(s,0)·ε0))`, valid because
//! `√(ln2/2) < 1`; the bracket is itself evaluated with outward rounding.

use std::f64::consts::LN_2;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::interval::Interval;
use crate::error::{Error, Result};

const MAX_DEPTH: usize = 64;
/// Ratio between consecutive initial subinterval endpoints.
const GEOMETRIC_RATIO: f64 = 1.25;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ineq3Constants {
    pub epsilon_coefficient: f64,
    pub sqrt_epsilon_coefficient: f64,
    pub radical_coefficient: f64,
    pub radicand_constant: f64,
    /// Coefficient `s` of ε inside the radicand.
    pub radicand_epsilon: f64,
}

impl Ineq3Constants {
    pub fn published() -> Self {
        Ineq3Constants {
            epsilon_coefficient: 2.573,
            sqrt_epsilon_coefficient: 0.4979,
            radical_coefficient: 1.308,
            radicand_constant: 0.0772,
            radicand_epsilon: -1.0,
        }
    }

    /// Constants re-derived from ρ, with the `+ε` radicand.
    pub fn derived(rho: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&rho) {
            return Err(Error::domain("rho", rho, "[0, 1)"));
        }
        let shrink = 1.0 - rho * rho;
        let lambda_coefficient = ((3.0 - rho).log2() - 2.5) * shrink + 1.0;
        let c0 = 0.5 * shrink + 0.5 * lambda_coefficient;
        Ok(Ineq3Constants {
            epsilon_coefficient: shrink + 2.0,
            sqrt_epsilon_coefficient: (LN_2 / 2.0).sqrt() * (shrink + lambda_coefficient),
            radical_coefficient: 2.0 * rho,
            radicand_constant: 0.5 - c0,
            radicand_epsilon: 1.0,
        })
    }

    fn radicand(&self, epsilon: f64) -> f64 {
        self.radicand_constant + (LN_2 * epsilon / 2.0).sqrt() - epsilon.sqrt() + self.radicand_epsilon * epsilon
    }
}

pub fn ineq3_value(epsilon: f64, constants: &Ineq3Constants) -> Result<f64> {
    if epsilon.is_nan() || epsilon < 0.0 {
        return Err(Error::domain("epsilon", epsilon, ">= 0"));
    }
    let rad = constants.radicand(epsilon);
    if rad < 0.0 {
        return Err(Error::NegativeRadicand { lo: epsilon, hi: epsilon });
    }
    let root = epsilon.sqrt();
    Ok(constants.epsilon_coefficient * epsilon
        + (constants.sqrt_epsilon_coefficient - 1.0 + constants.radical_coefficient * rad.sqrt()) * root)
}

/// `R(ε)` with the constants re-derived at `ρ = 0.654` and the `+ε` radicand.
pub fn ineq3_rederived(epsilon: f64) -> Result<f64> {
    ineq3_value(epsilon, &Ineq3Constants::derived(0.654)?)
}

/// Outward-rounded upper bound of `R` over `[lo, hi]`, or `None` when the
/// enclosure of the radicand reaches below zero.
fn interval_upper(lo: f64, hi: f64, c: &Ineq3Constants) -> Option<f64> {
    let e = Interval::new(lo, hi);
    let root = e.sqrt()?;
    let k = (Interval::around(LN_2) * Interval::point(0.5)).sqrt()?;
    let rad = Interval::around(c.radicand_constant)
        + (k - Interval::point(1.0)) * root
        + Interval::around(c.radicand_epsilon) * e;
    let radical = rad.sqrt()?;
    let r = Interval::around(c.epsilon_coefficient) * e
        + (Interval::around(c.sqrt_epsilon_coefficient) - Interval::point(1.0)
            + Interval::around(c.radical_coefficient) * radical)
            * root;
    Some(r.hi)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Ineq3Mode {
    Float,
    Interval,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ineq3Options {
    pub mode: Ineq3Mode,
    /// Float mode: grid spacing. Interval mode: largest subinterval width.
    pub grid_step: f64,
    /// Radius of the punctured neighborhood of 0 handled by the envelope.
    pub min_epsilon: f64,
    pub max_epsilon: f64,
    pub constants: Ineq3Constants,
}

impl Default for Ineq3Options {
    fn default() -> Self {
        Ineq3Options {
            mode: Ineq3Mode::Interval,
            grid_step: 1e-5,
            min_epsilon: 1e-8,
            max_epsilon: 0.01,
            constants: Ineq3Constants::published(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ineq3Sweep {
    pub grid_step: f64,
    pub points: usize,
    pub max_value: f64,
    pub argmax: f64,
    pub min_radicand: f64,
    pub all_negative: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NearZeroEnvelope {
    pub radius: f64,
    /// Upper bound of `c1√ε0 + c2 - 1 + c3√(c4 + max(s,0)·ε0)`.
    pub factor_upper: f64,
    /// Lower bound of the radicand on `(0, ε0]`.
    pub radicand_lower: f64,
    pub holds: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateLine {
    pub lo: f64,
    pub hi: f64,
    pub upper_bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateHeader {
    pub kind: String,
    pub constants: Ineq3Constants,
    pub min_epsilon: f64,
    pub max_epsilon: f64,
    pub max_width: f64,
    pub envelope: NearZeroEnvelope,
    pub intervals: usize,
    pub max_upper_bound: f64,
    pub all_negative: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ineq3Certificate {
    pub header: CertificateHeader,
    pub lines: Vec<CertificateLine>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum Ineq3Outcome {
    Float(Ineq3Sweep),
    Interval(Ineq3Certificate),
}

impl Ineq3Outcome {
    pub fn all_negative(&self) -> bool {
        match self {
            Ineq3Outcome::Float(s) => s.all_negative,
            Ineq3Outcome::Interval(c) => c.header.all_negative,
        }
    }
}

fn envelope(radius: f64, c: &Ineq3Constants) -> Option<NearZeroEnvelope> {
    let r = Interval::point(radius);
    let root = r.sqrt()?;
    let k = (Interval::around(LN_2) * Interval::point(0.5)).sqrt()?;
    let s = Interval::around(c.radicand_epsilon);
    let rad_top = Interval::around(c.radicand_constant) + Interval::point(c.radicand_epsilon.max(0.0)) * r;
    let factor = Interval::around(c.epsilon_coefficient) * root + Interval::around(c.sqrt_epsilon_coefficient)
        - Interval::point(1.0)
        + Interval::around(c.radical_coefficient) * rad_top.sqrt()?;
    let rad_low = Interval::around(c.radicand_constant)
        + (k - Interval::point(1.0)) * root
        + Interval::point(c.radicand_epsilon.min(0.0)) * r;
    let _ = s;
    Some(NearZeroEnvelope {
        radius,
        factor_upper: factor.hi,
        radicand_lower: rad_low.lo,
        holds: factor.hi < 0.0 && rad_low.lo >= 0.0,
    })
}

fn certify_piece(
    lo: f64,
    hi: f64,
    max_width: f64,
    c: &Ineq3Constants,
    depth: usize,
    out: &mut Vec<CertificateLine>,
) -> Result<()> {
    let upper = interval_upper(lo, hi, c);
    if let Some(u) = upper {
        if u < 0.0 && hi - lo <= max_width {
            out.push(CertificateLine { lo, hi, upper_bound: u });
            return Ok(());
        }
    }
    let mid = 0.5 * (lo + hi);
    let stuck = depth >= MAX_DEPTH || mid <= lo || mid >= hi;
    if stuck || (hi - lo <= max_width && ineq3_value(mid, c).is_ok_and(|v| v >= 0.0)) {
        return match upper {
            Some(u) => {
                // Genuinely non-negative here, or not resolvable: record it.
                out.push(CertificateLine { lo, hi, upper_bound: u.max(0.0) });
                Ok(())
            }
            None => Err(Error::NegativeRadicand { lo, hi }),
        };
    }
    certify_piece(lo, mid, max_width, c, depth + 1, out)?;
    certify_piece(mid, hi, max_width, c, depth + 1, out)
}

fn check_options(o: &Ineq3Options) -> Result<()> {
    if o.grid_step.is_nan() || o.grid_step <= 0.0 {
        return Err(Error::domain("grid_step", o.grid_step, "> 0"));
    }
    if !(o.min_epsilon > 0.0 && o.min_epsilon < o.max_epsilon) {
        return Err(Error::domain("min_epsilon", o.min_epsilon, "(0, max_epsilon)"));
    }
    if o.max_epsilon.is_nan() || o.max_epsilon > 1.0 {
        return Err(Error::domain("max_epsilon", o.max_epsilon, "(min_epsilon, 1]"));
    }
    Ok(())
}

fn sweep(o: &Ineq3Options) -> Result<Ineq3Sweep> {
    let steps = (o.max_epsilon / o.grid_step).floor() as usize;
    let mut grid: Vec<f64> = (1..=steps).map(|k| k as f64 * o.grid_step).collect();
    if grid.last().is_none_or(|&e| e < o.max_epsilon) {
        grid.push(o.max_epsilon);
    }
    let mut max_value = f64::NEG_INFINITY;
    let mut argmax = f64::NAN;
    let mut min_radicand = f64::INFINITY;
    for &e in &grid {
        let v = ineq3_value(e, &o.constants)?;
        min_radicand = min_radicand.min(o.constants.radicand(e));
        if v > max_value {
            max_value = v;
            argmax = e;
        }
    }
    Ok(Ineq3Sweep {
        grid_step: o.grid_step,
        points: grid.len(),
        max_value,
        argmax,
        min_radicand,
        all_negative: max_value < 0.0,
    })
}

fn certify(o: &Ineq3Options) -> Result<Ineq3Certificate> {
    let env = envelope(o.min_epsilon, &o.constants).ok_or(Error::NegativeRadicand { lo: 0.0, hi: o.min_epsilon })?;
    let mut cuts = vec![o.min_epsilon];
    while *cuts.last().unwrap() * GEOMETRIC_RATIO < o.max_epsilon {
        let next = cuts.last().unwrap() * GEOMETRIC_RATIO;
        cuts.push(next);
    }
    cuts.push(o.max_epsilon);
    let pieces: Vec<Vec<CertificateLine>> = cuts
        .par_windows(2)
        .map(|w| {
            let mut out = Vec::new();
            certify_piece(w[0], w[1], o.grid_step, &o.constants, 0, &mut out).map(|_| out)
        })
        .collect::<Result<_>>()?;
    let lines: Vec<CertificateLine> = pieces.into_iter().flatten().collect();
    let max_upper_bound = lines.iter().map(|l| l.upper_bound).fold(f64::NEG_INFINITY, f64::max);
    Ok(Ineq3Certificate {
        header: CertificateHeader {
            kind: "header".into(),
            constants: o.constants,
            min_epsilon: o.min_epsilon,
            max_epsilon: o.max_epsilon,
            max_width: o.grid_step,
            intervals: lines.len(),
            max_upper_bound,
            all_negative: max_upper_bound < 0.0 && env.holds,
            envelope: env,
        },
        lines,
    })
}

pub fn verify_ineq3(options: &Ineq3Options) -> Result<Ineq3Outcome> {
    check_options(options)?;
    Ok(match options.mode {
        Ineq3Mode::Float => Ineq3Outcome::Float(sweep(options)?),
        Ineq3Mode::Interval => Ineq3Outcome::Interval(certify(options)?),
    })
}

/// Re-evaluates every line and the envelope and checks that the lines tile
/// `[min_epsilon, max_epsilon]`. Errors with the first offending interval.
pub fn revalidate_certificate(cert: &Ineq3Certificate) -> Result<()> {
    let h = &cert.header;
    let fail = |lo: f64, hi: f64| Error::CertificationFailed { lo, hi };
    let env = envelope(h.min_epsilon, &h.constants).ok_or(fail(0.0, h.min_epsilon))?;
    if !env.holds || env != h.envelope {
        return Err(fail(0.0, h.min_epsilon));
    }
    if cert.lines.len() != h.intervals {
        return Err(fail(h.min_epsilon, h.max_epsilon));
    }
    let mut reach = h.min_epsilon;
    for line in &cert.lines {
        if line.lo != reach || line.hi <= line.lo {
            return Err(fail(reach, line.lo));
        }
        match interval_upper(line.lo, line.hi, &h.constants) {
            Some(u) if u < 0.0 && u == line.upper_bound => {}
            _ => return Err(fail(line.lo, line.hi)),
        }
        reach = line.hi;
    }
    if reach != h.max_epsilon {
        return Err(fail(reach, h.max_epsilon));
    }
    Ok(())
}
