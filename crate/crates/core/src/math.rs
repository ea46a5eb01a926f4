//! Exact integer helpers and compensated floating-point summation.

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational used for thresholds whose exponent must not be rounded.
pub type Rational = Ratio<i64>;

/// Parses a decimal such as `0.125`, `3/40` or `1e-2` into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::Parse { line: 0, message: format!("not a rational number: {text:?}") };
    if let Some((num, den)) = text.split_once('/') {
        let num: i64 = num.trim().parse().map_err(|_| bad())?;
        let den: i64 = den.trim().parse().map_err(|_| bad())?;
        if den == 0 {
            return Err(bad());
        }
        return Ok(Rational::new(num, den));
    }
    let (mantissa, exponent) = match text.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().map_err(|_| bad())?),
        None => (text, 0),
    };
    let negative = mantissa.starts_with('-');
    let mantissa = mantissa.trim_start_matches(['-', '+']);
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    if !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let mut num: i64 = digits.parse().map_err(|_| bad())?;
    if negative {
        num = -num;
    }
    let scale = exponent - frac_part.len() as i32;
    let pow10 = |k: u32| 10i64.checked_pow(k).ok_or_else(bad);
    let value = if scale >= 0 {
        Rational::from_integer(num.checked_mul(pow10(scale as u32)?).ok_or_else(bad)?)
    } else {
        Rational::new(num, pow10((-scale) as u32)?)
    };
    Ok(value)
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// `value >= 2^exponent`, decided exactly.
pub fn int_ge_pow2(value: u128, exponent: Rational) -> bool {
    if value == 0 {
        return false;
    }
    let p = *exponent.numer();
    let q = *exponent.denom();
    if p <= 0 {
        return true;
    }
    // value^q >= 2^p
    let lhs = BigUint::from(value).pow(q as u32);
    let rhs = BigUint::one() << (p as u64);
    lhs >= rhs
}

/// Smallest integer `s` with `s >= 2^exponent`.
pub fn ceil_pow2(exponent: Rational) -> u128 {
    if *exponent.numer() <= 0 {
        return 1;
    }
    let approx = 2f64.powf(rational_to_f64(&exponent)).ceil();
    let mut s = if approx.is_finite() && approx < 1.6e38 { approx as u128 } else { u128::MAX };
    while s > 1 && int_ge_pow2(s - 1, exponent) {
        s -= 1;
    }
    while !int_ge_pow2(s, exponent) {
        s += 1;
    }
    s
}

/// Exact binomial coefficient; panics on overflow of `u128` (n > 130).
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

pub fn binomial_big(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// `num / den` for big integers, accurate to a few ulps.
pub fn big_ratio(num: &BigUint, den: &BigUint) -> f64 {
    let shift = den.bits().saturating_sub(60);
    let n = (num >> shift).to_f64().unwrap_or(f64::INFINITY);
    let d = (den >> shift).to_f64().unwrap_or(f64::INFINITY);
    n / d
}

/// Neumaier's compensated summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Sum of `2^t` over the given log2 terms, returned in log2. Terms equal to
/// `-inf` contribute nothing; an empty or all-zero sum yields `-inf`.
pub fn log2_sum_exp2(terms: &[f64]) -> f64 {
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let mut acc = CompensatedSum::default();
    for &t in terms {
        if t > f64::NEG_INFINITY {
            acc.add((t - max).exp2());
        }
    }
    max + acc.value().log2()
}
