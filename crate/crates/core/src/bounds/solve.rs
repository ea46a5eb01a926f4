use crate::error::{Error, Result};

const FIXED_POINT_TOLERANCE: f64 = 1e-12;
const MAX_BISECTIONS: usize = 200;

/// Largest `x <= cap` with `x <= f(x)`, for `f` non-increasing.
///
/// Plain iteration of a decreasing map oscillates, so this bisects on the
/// predicate `x <= f(x)`, which holds on a down-closed set. Returns the upper
/// end of the final bracket, which errs on the safe side for an upper bound.
pub fn largest_fixed_point(f: impl Fn(f64) -> f64, cap: f64) -> Result<f64> {
    let top = f(cap);
    if !top.is_finite() {
        return Err(Error::NonConvergence(format!("right-hand side not finite at {cap}")));
    }
    if top >= cap {
        return Ok(cap);
    }
    // f(top) >= f(cap) = top, so `top` is consistent.
    let (mut lo, mut hi) = (top, cap);
    for _ in 0..MAX_BISECTIONS {
        if hi - lo <= FIXED_POINT_TOLERANCE {
            return Ok(hi);
        }
        let mid = 0.5 * (lo + hi);
        if mid <= f(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NonConvergence(format!("bracket [{lo}, {hi}] did not shrink")))
}

/// Closed form of the largest `x <= cap` with `x <= k + 2ρ√(ε(cap - x))`.
/// Writing `t = √(cap - x)`: `t = -ρ√ε + √(ρ²ε + cap - k)`.
pub fn quadratic_fixed_point(k: f64, rho: f64, epsilon: f64, cap: f64) -> f64 {
    let disc = rho * rho * epsilon + cap - k;
    if k >= cap {
        return cap;
    }
    let t = -rho * epsilon.sqrt() + disc.sqrt();
    cap - t * t
}

/// Golden-section minimization of a unimodal `f` on `[a, b]`.
pub fn golden_section_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisection_matches_closed_form() {
        for &(k, rho, eps, cap) in
            &[(0.4, 0.5, 0.01, 1.0), (0.3, 0.654, 0.005, 0.55), (0.9, 0.1, 0.2, 1.0), (0.2, 0.0, 0.0, 0.5)]
        {
            let f = |x: f64| k + 2.0 * rho * (eps * (cap - x)).sqrt();
            let x = largest_fixed_point(f, cap).unwrap();
            let closed = quadratic_fixed_point(k, rho, eps, cap);
            assert!((x - closed).abs() < 2e-12, "{x} vs {closed}");
            assert!(x >= closed);
        }
    }

    #[test]
    fn saturates_at_cap() {
        assert_eq!(largest_fixed_point(|_| 2.0, 1.0).unwrap(), 1.0);
        assert_eq!(quadratic_fixed_point(1.2, 0.3, 0.1, 1.0), 1.0);
    }

    #[test]
    fn rejects_nan() {
        assert!(largest_fixed_point(|_| f64::NAN, 1.0).is_err());
    }

    #[test]
    fn golden_section_quadratic() {
        let (x, fx) = golden_section_min(|x| (x - 0.3).powi(2), 0.0, 1.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-9);
        assert!(fx < 1e-18);
    }
}
