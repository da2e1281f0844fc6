//! Error function and complementary error function.
//!
//! Both are evaluated through the regularized incomplete gamma function with
//! shape ½, which keeps the complementary function accurate in relative terms
//! far into the tail.

use super::gamma::{ln_reg_lower_gamma, ln_reg_upper_gamma};

// x² below this uses the lower-gamma series (erf small, erfc ≈ 1).
const SERIES_LIMIT: f64 = 1.5;

/// `erf(x)`.
pub fn erf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x == 0.0 {
        return x;
    }
    let s = x.signum();
    let x2 = x * x;
    if x2 < SERIES_LIMIT {
        s * ln_reg_lower_gamma(0.5, x2).expect("valid arguments").exp()
    } else {
        s * (1.0 - ln_reg_upper_gamma(0.5, x2).expect("valid arguments").exp())
    }
}

/// `erfc(x) = 1 − erf(x)`, relative accuracy preserved in the deep tail.
pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.0 {
        return 2.0 - erfc(-x);
    }
    let x2 = x * x;
    if x2 < SERIES_LIMIT {
        1.0 - erf(x)
    } else {
        ln_reg_upper_gamma(0.5, x2).expect("valid arguments").exp()
    }
}

/// `ln erfc(x)`; finite for arguments where `erfc` itself underflows.
pub fn ln_erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x * x >= SERIES_LIMIT && x > 0.0 {
        ln_reg_upper_gamma(0.5, x * x).expect("valid arguments")
    } else {
        erfc(x).ln()
    }
}
