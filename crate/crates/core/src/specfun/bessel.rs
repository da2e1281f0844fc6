//! Modified Bessel functions: `I_ν` of real order and `K_0`, `K_1`.

use super::gamma::{ln_gamma, EULER_GAMMA};
use crate::error::{domain, Error, Result};

const MAX_TERMS: usize = 10_000_000;
// Below this the ascending series is summed directly in linear scale.
const DIRECT_SERIES_MAX_X: f64 = 30.0;

fn check_i(order: f64, x: f64) -> Result<()> {
    if !(order >= 0.0) || !order.is_finite() {
        return Err(domain("bessel_i", format!("order must be finite and >= 0, got {order}")));
    }
    if !(x >= 0.0) {
        return Err(domain("bessel_i", format!("x must be >= 0, got {x}")));
    }
    Ok(())
}

/// Ascending series for `ln I_ν(x)`, rescaled so any `x` is representable.
fn ln_i_series(order: f64, x: f64) -> Result<f64> {
    let q = 0.25 * x * x;
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut ln_scale = 0.0f64;
    let mut k = 0.0f64;
    for _ in 0..MAX_TERMS {
        k += 1.0;
        term *= q / (k * (order + k));
        sum += term;
        if term > 1e280 {
            sum *= 1e-280;
            term *= 1e-280;
            ln_scale += 280.0 * std::f64::consts::LN_10;
        }
        if k > 0.5 * x && term < sum * 1e-17 {
            let lead = order * (0.5 * x).ln() - ln_gamma(order + 1.0);
            return Ok(lead + ln_scale + sum.ln());
        }
    }
    Err(Error::NoConvergence {
        function: "bessel_i",
        iterations: MAX_TERMS,
    })
}

/// Hankel asymptotic expansion of `ln I_ν(x)`; `None` if it fails to reach
/// full precision before the terms start growing.
fn ln_i_asymptotic(order: f64, x: f64) -> Option<f64> {
    let mu = 4.0 * order * order;
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut prev = f64::INFINITY;
    for k in 1..200 {
        let kk = k as f64;
        let odd = 2.0 * kk - 1.0;
        term *= -(mu - odd * odd) / (8.0 * kk * x);
        if term.abs() > prev {
            return None;
        }
        prev = term.abs();
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            return Some(x - 0.5 * (2.0 * std::f64::consts::PI * x).ln() + sum.ln());
        }
    }
    None
}

/// `ln I_ν(x)` for real `ν ≥ 0`, `x ≥ 0`; `−∞` at `x = 0, ν > 0`.
pub fn ln_bessel_i(order: f64, x: f64) -> Result<f64> {
    check_i(order, x)?;
    if x == 0.0 {
        return Ok(if order == 0.0 { 0.0 } else { f64::NEG_INFINITY });
    }
    if x > DIRECT_SERIES_MAX_X && x > order * order {
        if let Some(v) = ln_i_asymptotic(order, x) {
            return Ok(v);
        }
    }
    ln_i_series(order, x)
}

/// `I_ν(x)`; relative accuracy ~1e-15 for `x ≤ 30`. Overflows to `+∞`
/// beyond `x ≈ 713`; use [`ln_bessel_i`] or [`bessel_i_scaled`] there.
pub fn bessel_i(order: f64, x: f64) -> Result<f64> {
    check_i(order, x)?;
    if x == 0.0 {
        return Ok(if order == 0.0 { 1.0 } else { 0.0 });
    }
    if x <= DIRECT_SERIES_MAX_X {
        let q = 0.25 * x * x;
        let lead = (order * (0.5 * x).ln() - ln_gamma(order + 1.0)).exp();
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k = 0.0;
        loop {
            k += 1.0;
            term *= q / (k * (order + k));
            sum += term;
            if k > 0.5 * x && term < sum * 1e-17 {
                break;
            }
        }
        return Ok(lead * sum);
    }
    ln_bessel_i(order, x).map(f64::exp)
}

/// Exponentially scaled `e^{−x} I_ν(x)`.
pub fn bessel_i_scaled(order: f64, x: f64) -> Result<f64> {
    ln_bessel_i(order, x).map(|l| (l - x).exp())
}

fn check_k(order: u32, x: f64) -> Result<()> {
    if order > 1 {
        return Err(domain("bessel_k", format!("only orders 0 and 1 are supported, got {order}")));
    }
    if !(x > 0.0) {
        return Err(domain("bessel_k", format!("x must be > 0, got {x}")));
    }
    Ok(())
}

/// Small-argument series for `(K_0(x), K_1(x))`, `0 < x ≤ 2`.
fn k01_series(x: f64) -> (f64, f64) {
    let q = 0.25 * x * x;
    let ln_half = (0.5 * x).ln();

    // I_0, I_1 and the digamma-weighted sums share the same power terms.
    let mut t0 = 1.0; // q^k / (k!)^2
    let mut t1 = 1.0; // q^k / (k! (k+1)!)
    let mut harmonic = 0.0; // H_k
    let mut i0 = 1.0;
    let mut i1_red = 1.0; // I_1(x) / (x/2)
    let mut k0_sum = 0.0;
    let mut k1_sum = (-EULER_GAMMA) + (1.0 - EULER_GAMMA); // ψ(1) + ψ(2)
    let mut k = 0.0;
    loop {
        k += 1.0;
        t0 *= q / (k * k);
        t1 *= q / (k * (k + 1.0));
        let h_next = harmonic + 1.0 / k; // H_k
        let psi_a = h_next - EULER_GAMMA; // ψ(k+1)
        let psi_b = h_next + 1.0 / (k + 1.0) - EULER_GAMMA; // ψ(k+2)
        harmonic = h_next;
        i0 += t0;
        i1_red += t1;
        k0_sum += harmonic * t0;
        k1_sum += (psi_a + psi_b) * t1;
        if t0 < 1e-18 * i0 && t1 < 1e-18 * i1_red {
            break;
        }
    }
    let i1 = 0.5 * x * i1_red;
    let k0 = -(ln_half + EULER_GAMMA) * i0 + k0_sum;
    let k1 = 1.0 / x + ln_half * i1 - 0.25 * x * k1_sum;
    (k0, k1)
}

/// Large-argument expansion of `e^x K_ν(x)`, `ν ∈ {0, 1}`.
fn k_scaled_asymptotic(order: u32, x: f64) -> f64 {
    let mu = 4.0 * (order * order) as f64;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..60 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        term *= (mu - odd * odd) / (kf * 8.0 * x);
        sum += term;
        if term.abs() < 1e-17 * sum {
            break;
        }
    }
    (std::f64::consts::PI / (2.0 * x)).sqrt() * sum
}

/// Steed/Temme continued fraction for `e^x K_0(x)` and `e^x K_1(x)`, `x ≥ 2`.
fn k01_scaled_cf(x: f64) -> Result<(f64, f64)> {
    const MAXIT: usize = 100_000;
    let a1 = 0.25;
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    let mut converged = false;
    for i in 2..MAXIT {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < 1e-17 {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            function: "bessel_k",
            iterations: MAXIT,
        });
    }
    h *= a1;
    let k0 = (std::f64::consts::PI / (2.0 * x)).sqrt() / s;
    let k1 = k0 * (x + 0.5 - h) / x;
    Ok((k0, k1))
}

/// `I_0(x) − 1` without cancellation.
pub fn bessel_i0_m1(x: f64) -> f64 {
    if x > 2.0 {
        return bessel_i(0.0, x).expect("x >= 0") - 1.0;
    }
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 0.0;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= q / (k * k);
        sum += term;
        if term <= 1e-18 * sum {
            return sum;
        }
    }
}

/// `x K_1(x) − 1` without cancellation, `0 < x ≤ 2`.
pub fn bessel_xk1_m1(x: f64) -> Result<f64> {
    check_k(1, x)?;
    if x > 2.0 {
        return Ok(x * bessel_k(1, x)? - 1.0);
    }
    // x K_1(x) = 1 + x ln(x/2) I_1(x) − (x²/4) Σ (ψ(k+1) + ψ(k+2)) q^k/(k!(k+1)!)
    let q = 0.25 * x * x;
    let mut t1 = 1.0;
    let mut harmonic = 0.0;
    let mut i1_red = 1.0;
    let mut k1_sum = 1.0 - 2.0 * EULER_GAMMA;
    let mut k = 0.0;
    loop {
        k += 1.0;
        t1 *= q / (k * (k + 1.0));
        harmonic += 1.0 / k;
        let psi_sum = 2.0 * harmonic + 1.0 / (k + 1.0) - 2.0 * EULER_GAMMA;
        i1_red += t1;
        k1_sum += psi_sum * t1;
        if t1 < 1e-18 * i1_red {
            break;
        }
    }
    let i1 = 0.5 * x * i1_red;
    Ok(x * (0.5 * x).ln() * i1 - q * k1_sum)
}

/// Exponentially scaled `e^x K_n(x)`, `n ∈ {0, 1}`.
pub fn bessel_k_scaled(order: u32, x: f64) -> Result<f64> {
    check_k(order, x)?;
    if x <= 2.0 {
        let (k0, k1) = k01_series(x);
        let v = if order == 0 { k0 } else { k1 };
        Ok(v * x.exp())
    } else if x > 60.0 {
        Ok(k_scaled_asymptotic(order, x))
    } else {
        let (k0, k1) = k01_scaled_cf(x)?;
        Ok(if order == 0 { k0 } else { k1 })
    }
}

/// `K_n(x)` for `n ∈ {0, 1}` and `x > 0`. Diverges at the origin.
pub fn bessel_k(order: u32, x: f64) -> Result<f64> {
    check_k(order, x)?;
    if x <= 2.0 {
        let (k0, k1) = k01_series(x);
        Ok(if order == 0 { k0 } else { k1 })
    } else {
        bessel_k_scaled(order, x).map(|v| v * (-x).exp())
    }
}

/// `ln K_n(x)`.
pub fn ln_bessel_k(order: u32, x: f64) -> Result<f64> {
    bessel_k_scaled(order, x).map(|v| v.ln() - x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_routes_agree_at_switch() {
        for order in [0, 1] {
            let cf = if order == 0 { k01_scaled_cf(60.0).unwrap().0 } else { k01_scaled_cf(60.0).unwrap().1 };
            let asym = k_scaled_asymptotic(order, 60.0);
            assert!((cf / asym - 1.0).abs() < 1e-14, "order {order}");
        }
        assert!(bessel_k_scaled(0, 1e300).unwrap() > 0.0);
        assert_eq!(bessel_k(1, 1e300).unwrap(), 0.0);
    }

    #[test]
    fn i_at_origin() {
        assert_eq!(bessel_i(0.0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_i(1.0, 0.0).unwrap(), 0.0);
        assert_eq!(bessel_i(2.5, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn i_half_order_closed_form() {
        // I_{1/2}(x) = sqrt(2/(πx)) sinh x
        for &x in &[0.1, 1.0, 7.5, 25.0] {
            let expect = (2.0 / (std::f64::consts::PI * x)).sqrt() * x.sinh();
            let got = bessel_i(0.5, x).unwrap();
            assert!(((got - expect) / expect).abs() < 1e-14, "x={x}");
        }
    }

    #[test]
    fn log_i_matches_direct_and_asymptotic_branch() {
        for &order in &[0.0, 1.0, 1.5, 3.0] {
            for &x in &[29.0, 31.0, 60.0, 200.0] {
                let series = ln_i_series(order, x).unwrap();
                let chosen = ln_bessel_i(order, x).unwrap();
                assert!((series - chosen).abs() < 1e-13 * series.abs(), "ν={order} x={x}");
            }
        }
        // Far beyond overflow.
        let l = ln_bessel_i(0.0, 1e5).unwrap();
        let approx = 1e5 - 0.5 * (2.0 * std::f64::consts::PI * 1e5).ln() + (1.0f64 + 1.0 / 8e5).ln();
        assert!((l - approx).abs() < 1e-10);
    }

    #[test]
    fn k_domain() {
        assert!(bessel_k(0, 0.0).is_err());
        assert!(bessel_k(1, -1.0).is_err());
        assert!(bessel_k(2, 1.0).is_err());
    }

    #[test]
    fn k_wronskian() {
        // I_0 K_1 + I_1 K_0 = 1/x
        for &x in &[0.01, 0.5, 1.9, 2.1, 5.0, 20.0] {
            let i0 = bessel_i(0.0, x).unwrap();
            let i1 = bessel_i(1.0, x).unwrap();
            let k0 = bessel_k(0, x).unwrap();
            let k1 = bessel_k(1, x).unwrap();
            let w = i0 * k1 + i1 * k0;
            assert!((w * x - 1.0).abs() < 1e-13, "x={x}: {}", w * x);
        }
    }

    #[test]
    fn cancellation_free_helpers() {
        for &x in &[1e-6, 0.01, 0.3, 1.0, 1.99] {
            let direct = bessel_i(0.0, x).unwrap() - 1.0;
            assert!((bessel_i0_m1(x) - direct).abs() <= 1e-15 * (1.0 + direct.abs()) + 1e-16);
            let xk1 = x * bessel_k(1, x).unwrap() - 1.0;
            assert!((bessel_xk1_m1(x).unwrap() - xk1).abs() < 1e-14);
        }
        // Leading behavior (x²/2) ln(x/2) for tiny x.
        let x = 1e-8;
        let v = bessel_xk1_m1(x).unwrap();
        let lead = 0.5 * x * x * ((0.5 * x).ln() + EULER_GAMMA - 0.5);
        assert!(((v - lead) / lead).abs() < 1e-10, "{v} vs {lead}");
    }

    #[test]
    fn k0_small_argument_asymptote() {
        let x = 1e-8;
        let k0 = bessel_k(0, x).unwrap();
        let asym = -(0.5 * x).ln() - EULER_GAMMA;
        assert!((k0 - asym).abs() < 1e-12);
    }
}
