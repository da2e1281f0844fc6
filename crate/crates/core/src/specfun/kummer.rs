//! Confluent hypergeometric function `₁F₁(a; b; x)` (Kummer's `M`).

use crate::error::{domain, Error, Result};

const MAX_TERMS: usize = 10_000_000;

fn check(a: f64, b: f64, x: f64) -> Result<()> {
    if !a.is_finite() || !x.is_finite() {
        return Err(domain("hyp1f1", format!("arguments must be finite, got a={a}, x={x}")));
    }
    if !(b > 0.0) || !b.is_finite() {
        return Err(domain("hyp1f1", format!("b must be finite and > 0, got {b}")));
    }
    Ok(())
}

/// `ln` of the power series for `a ≥ 0`, `x ≥ 0`, where every term is
/// nonnegative. Rescales as it goes so that large `x` does not overflow.
fn ln_series_positive(a: f64, b: f64, x: f64) -> Result<f64> {
    if a == 0.0 || x == 0.0 {
        return Ok(0.0);
    }
    match ln_asymptotic(a, b, x) {
        Some(l) => Ok(l),
        None => ln_power_series(a, b, x),
    }
}

fn ln_power_series(a: f64, b: f64, x: f64) -> Result<f64> {
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut ln_scale = 0.0f64;
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        term *= (a + nf) * x / ((b + nf) * (nf + 1.0));
        sum += term;
        if sum > 1e280 {
            sum *= 1e-280;
            term *= 1e-280;
            ln_scale += 280.0 * std::f64::consts::LN_10;
        }
        // Past the peak the ratio of successive terms drops below one.
        let ratio = (a + nf + 1.0) * x / ((b + nf + 1.0) * (nf + 2.0));
        if ratio < 1.0 && term * ratio / (1.0 - ratio) < 1e-17 * sum {
            return Ok(ln_scale + sum.ln());
        }
    }
    Err(Error::NoConvergence {
        function: "hyp1f1",
        iterations: MAX_TERMS,
    })
}

/// Large-`x` expansion `Γ(b)/Γ(a) e^x x^{a−b} Σ (b−a)_s (1−a)_s / (s! x^s)`,
/// used once the terms shrink fast enough to reach full precision.
fn ln_asymptotic(a: f64, b: f64, x: f64) -> Option<f64> {
    let c = (b - a).abs() + (1.0 - a).abs();
    if x < 50.0 + 2.0 * c * c {
        return None;
    }
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    for s in 0..200 {
        let sf = s as f64;
        let next = term * (b - a + sf) * (1.0 - a + sf) / ((sf + 1.0) * x);
        if next.abs() > term.abs() {
            return None;
        }
        term = next;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            return Some(x + (a - b) * x.ln() + super::ln_gamma(b) - super::ln_gamma(a) + sum.ln());
        }
    }
    None
}

/// `ln ₁F₁(a; b; x)` for `a ≥ 0`, `b > 0`, `x ≥ 0`, where the function is
/// positive and may exceed the `f64` range.
pub fn ln_hyp1f1(a: f64, b: f64, x: f64) -> Result<f64> {
    check(a, b, x)?;
    if a < 0.0 || x < 0.0 {
        return Err(domain("ln_hyp1f1", format!("requires a >= 0 and x >= 0, got a={a}, x={x}")));
    }
    ln_series_positive(a, b, x)
}

/// `₁F₁(a; b; x)`.
///
/// Uses the positive-term series when `a, x ≥ 0`, Kummer's transformation
/// `e^x ₁F₁(b − a; b; −x)` for `x < 0` with `b ≥ a`, and the plain
/// alternating series otherwise (only accurate for moderate `|x|`).
pub fn hyp1f1(a: f64, b: f64, x: f64) -> Result<f64> {
    check(a, b, x)?;
    if x >= 0.0 && a >= 0.0 {
        let l = ln_series_positive(a, b, x)?;
        if l > 709.0 {
            return Err(Error::Overflow {
                function: "hyp1f1",
                log_value: l,
            });
        }
        return Ok(l.exp());
    }
    if x < 0.0 && b - a >= 0.0 {
        let l = ln_series_positive(b - a, b, -x)? + x;
        return Ok(l.exp());
    }
    // General series.
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        term *= (a + nf) * x / ((b + nf) * (nf + 1.0));
        sum += term;
        if term == 0.0 || (nf > x.abs() && term.abs() < 1e-17 * sum.abs()) {
            return Ok(sum);
        }
    }
    Err(Error::NoConvergence {
        function: "hyp1f1",
        iterations: MAX_TERMS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn large_argument_expansion() {
        // ln ₁F₁(1; 2; x) = x − ln x + ln(1 − e^{−x})
        for &x in &[60.0, 500.0, 1e6] {
            let v = ln_hyp1f1(1.0, 2.0, x).unwrap();
            let e = x - f64::ln(x) + f64::ln_1p(-f64::exp(-x));
            assert!((v / e - 1.0).abs() < 1e-14, "x={x}");
        }
        for (a, b, x) in [(2.5, 1.5, 100.0), (0.25, 2.0, 80.0), (3.0, 0.5, 300.0)] {
            let series = ln_power_series(a, b, x).unwrap();
            let asym = ln_asymptotic(a, b, x).unwrap();
            assert!((series - asym).abs() < 1e-13 * series, "{a} {b} {x}");
        }
    }

    #[test]
    fn reduces_to_exponential() {
        // ₁F₁(a; a; x) = e^x
        for &x in &[-5.0, -0.3, 0.0, 0.7, 12.0] {
            let v = hyp1f1(2.5, 2.5, x).unwrap();
            assert!((v / f64::exp(x) - 1.0).abs() < 1e-14, "x={x}");
        }
    }

    #[test]
    fn elementary_closed_form() {
        // ₁F₁(1; 2; x) = (e^x − 1)/x
        for &x in &[1e-6, 0.5, 3.0, 40.0, -2.0] {
            let v = hyp1f1(1.0, 2.0, x).unwrap();
            let e = f64::exp_m1(x) / x;
            assert!((v / e - 1.0).abs() < 1e-13, "x={x}");
        }
    }

    #[test]
    fn log_variant_beyond_overflow() {
        // ₁F₁(1; 1; x) = e^x
        let l = ln_hyp1f1(1.0, 1.0, 2000.0).unwrap();
        assert!((l - 2000.0).abs() < 1e-10);
        assert!(matches!(hyp1f1(1.0, 1.0, 2000.0), Err(Error::Overflow { .. })));
    }

    #[test]
    fn polynomial_for_negative_integer_a() {
        // ₁F₁(−2; 1; x) = 1 − 2x + x²/2 = L_2(x)
        let x = 1.7;
        let v = hyp1f1(-2.0, 1.0, x).unwrap();
        assert!((v - (1.0 - 2.0 * x + 0.5 * x * x)).abs() < 1e-14);
    }
}
