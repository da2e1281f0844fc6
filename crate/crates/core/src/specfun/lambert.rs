//! Real branches of the Lambert W function.

use crate::error::{domain, Error, Result};
use serde::{Deserialize, Serialize};

const INV_E: f64 = 0.367_879_441_171_442_33;

/// Real branch selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WBranch {
    /// `W₀`, defined for `x ≥ −1/e`, values `≥ −1`.
    Principal,
    /// `W₋₁`, defined for `−1/e ≤ x < 0`, values `≤ −1`.
    Lower,
}

fn initial_guess(x: f64, branch: WBranch) -> f64 {
    let branch_sign = match branch {
        WBranch::Principal => 1.0,
        WBranch::Lower => -1.0,
    };
    // Series about the branch point.
    if x < -0.25 {
        let p = branch_sign * (2.0 * (std::f64::consts::E * x + 1.0)).max(0.0).sqrt();
        return -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
    }
    match branch {
        WBranch::Principal => {
            // Winitzki.
            let l = (1.0 + x).ln();
            l * (1.0 - (1.0 + l).ln() / (2.0 + l))
        }
        WBranch::Lower => {
            let l1 = (-x).ln();
            let l2 = (-l1).ln();
            l1 - l2 + l2 / l1
        }
    }
}

/// `W(x)` on the requested real branch, by Halley iteration.
pub fn lambert_w(x: f64, branch: WBranch) -> Result<f64> {
    if x.is_nan() || x < -INV_E * (1.0 + 1e-15) {
        return Err(domain("lambert_w", format!("x must be >= -1/e, got {x}")));
    }
    if branch == WBranch::Lower && x >= 0.0 {
        return Err(domain("lambert_w", format!("lower branch requires x < 0, got {x}")));
    }
    if x <= -INV_E {
        return Ok(-1.0);
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x.is_infinite() {
        return Ok(f64::INFINITY);
    }
    let mut w = initial_guess(x, branch);
    for _ in 0..100 {
        let ew = w.exp();
        let f = w * ew - x;
        let wp1 = w + 1.0;
        if wp1 == 0.0 {
            return Ok(w);
        }
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        let step = f / denom;
        w -= step;
        if step.abs() <= 4.0 * f64::EPSILON * (1.0 + w.abs()) {
            return Ok(w);
        }
    }
    Err(Error::NoConvergence {
        function: "lambert_w",
        iterations: 100,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn special_points() {
        assert_eq!(lambert_w(0.0, WBranch::Principal).unwrap(), 0.0);
        assert_eq!(lambert_w(-INV_E, WBranch::Principal).unwrap(), -1.0);
        assert_eq!(lambert_w(-INV_E, WBranch::Lower).unwrap(), -1.0);
        assert!((lambert_w(std::f64::consts::E, WBranch::Principal).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn inverse_identity_on_both_branches() {
        for &x in &[-0.367, -0.3, -0.1, -1e-3, -1e-30, -1e-300] {
            let w = lambert_w(x, WBranch::Lower).unwrap();
            assert!(w <= -1.0);
            assert!(((w * w.exp() - x) / x).abs() < 1e-13, "x={x} w={w}");
        }
        for &x in &[-0.367, -0.1, 1e-10, 0.5, 10.0, 1e10, 1e300] {
            let w = lambert_w(x, WBranch::Principal).unwrap();
            assert!(w >= -1.0);
            let back = w * w.exp();
            assert!(((back - x) / x).abs() < 1e-13, "x={x} w={w}");
        }
    }

    #[test]
    fn domain() {
        assert!(lambert_w(-0.5, WBranch::Principal).is_err());
        assert!(lambert_w(0.1, WBranch::Lower).is_err());
    }
}
