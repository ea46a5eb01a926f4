use std::f64::consts::LN_2;

use crate::error::{Error, Result};

/// `h(x) = -x log2 x - (1-x) log2(1-x)`, with `h(0) = h(1) = 0`.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain("x", x, "[0, 1]"));
    }
    let term = |p: f64| if p == 0.0 { 0.0 } else { -p * p.log2() };
    Ok(term(x) + term(1.0 - x))
}

/// `1 - (2/ln2)x² - h(1/2 + x)`.
///
/// With `y = 2x` this is `Σ_{k≥2} y^(2k) / (k(2k-1)) / (2 ln2)`; the series is
/// summed directly for small `y`, where the closed form cancels
/// catastrophically.
pub fn entropy_half_bound_check(x: f64) -> Result<f64> {
    if !(x > 0.0 && x <= 0.5) {
        return Err(Error::domain("x", x, "(0, 1/2]"));
    }
    let y = 2.0 * x;
    if y == 1.0 {
        return Ok(1.0 - 0.5 / LN_2);
    }
    let nats = if y < 0.25 {
        let y2 = y * y;
        let mut power = y2 * y2;
        let mut sum = 0.0;
        for k in 2..40 {
            let term = power / (k * (2 * k - 1)) as f64;
            sum += term;
            if term < sum * 1e-18 {
                break;
            }
            power *= y2;
        }
        sum
    } else {
        (1.0 + y) * y.ln_1p() + (1.0 - y) * (-y).ln_1p() - y * y
    };
    Ok(nats / (2.0 * LN_2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs()
    }

    #[test]
    fn entropy_values() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert!(close(binary_entropy(0.25).unwrap(), 0.811_278_124_459_132_9, 1e-15));
        assert!(binary_entropy(1.5).is_err());
        for k in 0..=100 {
            let x = k as f64 / 100.0;
            assert!((binary_entropy(x).unwrap() - binary_entropy(1.0 - x).unwrap()).abs() < 1e-15);
        }
    }

    #[test]
    fn margin_against_high_precision() {
        // 40-digit references.
        let cases = [
            (1e-4, 1.923_593_418_629_446e-16),
            (1e-3, 1.923_596_465_607_967e-12),
            (0.01, 1.923_901_228_762_2e-8),
            (0.1, 1.955_047_275_520_928_5e-4),
            (0.25, 8.384_995_429_746_71e-3),
            (0.4, 6.934_199_332_625_049e-2),
            (0.5, 0.278_652_479_555_518_3),
        ];
        for (x, want) in cases {
            let got = entropy_half_bound_check(x).unwrap();
            assert!(close(got, want, 1e-12), "x={x}: {got} vs {want}");
        }
    }

    #[test]
    fn margin_positive_on_grid() {
        for k in 1..=500 {
            let x = 0.001 * k as f64;
            assert!(entropy_half_bound_check(x).unwrap() > 0.0, "x={x}");
        }
        assert!(entropy_half_bound_check(0.0).is_err());
        assert!(entropy_half_bound_check(0.51).is_err());
    }
}
