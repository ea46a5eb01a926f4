//! Closed intervals with outward rounding.
//!
//! `+ - *` and `sqrt` are correctly rounded in IEEE 754, so widening each
//! result by one ulp in each direction encloses the exact value. `log2` is a
//! libm call without that guarantee and is widened by `LOG2_ULPS`.

use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

const LOG2_ULPS: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

fn down(x: f64, steps: usize) -> f64 {
    (0..steps).fold(x, |v, _| v.next_down())
}

fn up(x: f64, steps: usize) -> f64 {
    (0..steps).fold(x, |v, _| v.next_up())
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "empty interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    /// An exactly representable value.
    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    /// A real constant known only to within rounding, e.g. `LN_2`.
    pub fn around(x: f64) -> Self {
        Interval { lo: x.next_down(), hi: x.next_up() }
    }

    fn outward(lo: f64, hi: f64) -> Self {
        Interval { lo: lo.next_down(), hi: hi.next_up() }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// Intersects with `[0, ∞)`, for quantities known to be non-negative whose
    /// enclosure dipped below zero only through outward rounding.
    pub fn clamp_nonneg(self) -> Self {
        Interval { lo: self.lo.max(0.0), hi: self.hi.max(0.0) }
    }

    /// `None` when the interval reaches below zero.
    pub fn sqrt(self) -> Option<Self> {
        (self.lo >= 0.0).then(|| Interval { lo: self.lo.sqrt().next_down().max(0.0), hi: self.hi.sqrt().next_up() })
    }

    /// `None` unless the interval is strictly positive.
    pub fn log2(self) -> Option<Self> {
        (self.lo > 0.0).then(|| Interval { lo: down(self.lo.log2(), LOG2_ULPS), hi: up(self.hi.log2(), LOG2_ULPS) })
    }

    pub fn square(self) -> Self {
        if self.lo >= 0.0 {
            Self::outward(self.lo * self.lo, self.hi * self.hi)
        } else if self.hi <= 0.0 {
            Self::outward(self.hi * self.hi, self.lo * self.lo)
        } else {
            let m = (self.lo * self.lo).max(self.hi * self.hi);
            Interval { lo: 0.0, hi: m.next_up() }
        }
    }

    pub fn min(self, other: Self) -> Self {
        Interval { lo: self.lo.min(other.lo), hi: self.hi.min(other.hi) }
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Interval) -> Interval {
        Interval::outward(self.lo + rhs.lo, self.hi + rhs.hi)
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, rhs: Interval) -> Interval {
        Interval::outward(self.lo - rhs.hi, self.hi - rhs.lo)
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval { lo: -self.hi, hi: -self.lo }
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        let p = [self.lo * rhs.lo, self.lo * rhs.hi, self.hi * rhs.lo, self.hi * rhs.hi];
        let lo = p.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval::outward(lo, hi)
    }
}

impl From<f64> for Interval {
    fn from(x: f64) -> Self {
        Interval::point(x)
    }
}
