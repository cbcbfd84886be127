//! Log-domain factorials and binomial coefficients.
//!
//! Everything here works with `ln` values so that quantities such as
//! `C(64, 32)` or `sqrt(150!)` can be combined before exponentiating.

use std::f64::consts::PI;

/// Largest integer for which `n!` is finite in double precision.
const DIRECT_LIMIT: u64 = 170;

/// Integers below this are exactly representable in `f64`.
const EXACT_INT: f64 = 9_007_199_254_740_992.0;

/// `ln(n!)`.
///
/// Up to 170 the factorial is accumulated directly in `f64` (relative error a
/// few ulps), beyond that a Stirling series is used.
pub fn ln_factorial(n: u64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    if n <= DIRECT_LIMIT {
        let mut acc = 1.0_f64;
        for k in 2..=n {
            acc *= k as f64;
        }
        return acc.ln();
    }
    let x = n as f64;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    x * x.ln() - x + 0.5 * (2.0 * PI * x).ln() + inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 / 1260.0))
}

/// `ln C(n, k)`; `-inf` when `k > n`.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// `C(n, k)` as a float. Results below 2^53 are rounded to the exact integer.
pub fn binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    if k == 0 {
        return 1.0;
    }
    let v = ln_binomial(n, k).exp();
    if v < EXACT_INT {
        v.round()
    } else {
        v
    }
}

/// `ln(n (n-1) ... (n-p+1))`; `-inf` when `p > n` (the product contains a zero).
pub fn ln_falling_factorial(n: u64, p: u64) -> f64 {
    if p > n {
        return f64::NEG_INFINITY;
    }
    ln_factorial(n) - ln_factorial(n - p)
}

/// `n (n-1) ... (n-p+1)` by direct multiplication; zero when `p > n`.
pub fn falling_factorial(n: u64, p: u64) -> f64 {
    if p > n {
        return 0.0;
    }
    ((n - p + 1)..=n).fold(1.0, |acc, k| acc * k as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_factorials() {
        assert_eq!(ln_factorial(0), 0.0);
        assert_eq!(ln_factorial(1), 0.0);
        assert!((ln_factorial(5) - 120f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn stirling_branch_is_continuous() {
        // 171! = 171 * 170!
        let lhs = ln_factorial(171);
        let rhs = ln_factorial(170) + 171f64.ln();
        assert!((lhs - rhs).abs() < 1e-11 * rhs, "{lhs} vs {rhs}");
        let lhs = ln_factorial(400);
        let rhs = ln_factorial(399) + 400f64.ln();
        assert!((lhs - rhs).abs() < 1e-12 * rhs);
    }

    #[test]
    fn binomials_are_exact_integers_when_representable() {
        assert_eq!(binomial(4, 2), 6.0);
        assert_eq!(binomial(10, 3), 120.0);
        assert_eq!(binomial(40, 20), 137_846_528_820.0);
        assert_eq!(binomial(3, 5), 0.0);
        assert_eq!(binomial(7, 0), 1.0);
        // C(64, 32) = 1832624140942590534, outside the exact range
        let c = binomial(64, 32);
        assert!((c - 1.832_624_140_942_590_5e18).abs() / c < 1e-13);
    }

    #[test]
    fn falling_factorials() {
        assert_eq!(falling_factorial(5, 0), 1.0);
        assert_eq!(falling_factorial(5, 2), 20.0);
        assert_eq!(falling_factorial(2, 3), 0.0);
        assert!((ln_falling_factorial(10, 3) - 720f64.ln()).abs() < 1e-13);
        assert_eq!(ln_falling_factorial(1, 2), f64::NEG_INFINITY);
    }
}
